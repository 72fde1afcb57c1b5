// refinement.hpp — mixed simulation between GTSs.
//
// A relation H relates concrete states (left model) to abstract states
// (right model).  (s1, s2) in H must satisfy:
//   * label containment: L2(s2) subset of L1(s1);
//   * may forward: every may step of s1 is matched by a may step of s2
//     into an H-related state;
//   * must backward: every must hypertransition of s2 is matched by one of
//     s1 all of whose members relate into the abstract target set.
//
// Kripke structures take part through embed_ks, so only GTS-vs-GTS
// simulation is implemented.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mucheck/models.hpp"

namespace mucheck {

struct SimRelation {
  std::vector<std::pair<std::string, std::string>> pairs;
};

// Relation as index masks: rel[s1] = mask of related states of the right
// model.  This is the representation the algorithms work on.
using RelMasks = std::vector<StateSet>;

RelMasks to_masks(const Gts& m1, const Gts& m2, const SimRelation& h);
SimRelation to_relation(const Gts& m1, const Gts& m2, const RelMasks& rel);

bool is_mixed_simulation(const Gts& m1, const Gts& m2, const SimRelation& h);
bool is_mixed_simulation_masks(const Gts& m1, const Gts& m2, const RelMasks& rel);

// Building blocks: a relation is a mixed simulation iff it is contained in
// the label-compatible pairs and its may/must clauses hold.
RelMasks label_compatible_pairs(const Gts& m1, const Gts& m2);
bool relation_clauses_hold(const Gts& m1, const Gts& m2, const RelMasks& rel);

// Greatest mixed simulation: start from all label-compatible pairs and
// delete violating pairs until stable.  Contains every mixed simulation.
SimRelation maximal_mixed_simulation(const Gts& m1, const Gts& m2);
RelMasks maximal_mixed_simulation_masks(const Gts& m1, const Gts& m2);

bool leq_mix_state(const Gts& m1, const std::string& s1, const Gts& m2,
                   const std::string& s2);
bool leq_mix_model(const Gts& m1, const Gts& m2);

}  // namespace mucheck
