// explorer.hpp — bounded brute-force oracles.
//
// An enumeration universe fixes a model kind, a proposition list and a state
// budget; enumerate() then yields every model of that kind exactly once, in
// a deterministic order (sizes ascending, then labelling, then may edges,
// then must families per state).  A universe over max_states = n starts with
// the full universe over n-1 as a prefix.
//
// Bounded concretisation sets, the bounded thorough verdict and the bounded
// minimal-model search are all filters over such universes.  Every verdict
// they produce is relative to the stated bound.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mucheck/abstraction.hpp"
#include "mucheck/models.hpp"
#include "mucheck/refinement.hpp"
#include "mucheck/semantics.hpp"

namespace mucheck {

struct EnumUniverse {
  ModelKind kind = ModelKind::KS;
  int max_states = 1;
  std::vector<std::string> ap;
  bool pointed = true;  // initial state fixed to the first state

  // When nonempty: Kripke structures over exactly these named states, with
  // every choice of the distinguished (initial) state enumerated.  Used by
  // contextual concretisation, where concrete state names matter.
  std::vector<std::string> fixed_states;

  bool operator==(const EnumUniverse&) const = default;
};

uint64_t universe_size(const EnumUniverse& u);
uint64_t universe_slice_size(const EnumUniverse& u, int n);  // models with exactly n states

// Streams every model in order; return false from the callback to stop.
// Kripke universes yield (ks, nullptr); modal universes yield (nullptr, gts).
// The references passed are scratch objects, valid only during the call.
using EnumCallback = std::function<bool(uint64_t idx, const Ks* ks, const Gts* gts)>;
void enumerate(const EnumUniverse& u, const EnumCallback& fn);

Ks universe_ks(const EnumUniverse& u, uint64_t idx);    // decode (KS universes)
Gts universe_gts(const EnumUniverse& u, uint64_t idx);  // decode (KMTS/GTS universes)
std::optional<uint64_t> universe_index_of(const EnumUniverse& u, const Ks& k);

struct BoundedGamma {
  EnumUniverse universe;
  std::vector<uint64_t> members;  // sorted universe indices
};

// Pointed Kripke structures of the universe whose distinguished state is
// mixed-simulated by <m, s>.
BoundedGamma gamma_bounded(const Gts& m, const std::string& s, const EnumUniverse& u);

// Concretisations over exactly the setting's concrete state names, pointed
// at a rho-mate of s, such that rho itself (restricted to the two state
// sets) is a mixed simulation into m.
BoundedGamma gamma_contextual(const AbstractionSetting& setting, const Gts& m,
                              const std::string& s);

struct GammaComparison {
  bool equal = false;
  std::optional<uint64_t> witness;  // least index in the symmetric difference
  bool witness_in_first = false;
};

GammaComparison compare_gamma(const BoundedGamma& a, const BoundedGamma& b);

ThreeValued thorough_bounded(const Gts& m, const std::string& s, const Formula& f,
                             const EnumUniverse& u);

// Least n <= max_size such that some GTS with n states mixed-simulates k and
// makes f true at all its initial states.
std::optional<int> minmodel_bounded(const Formula& f, const Ks& k, int max_size);

struct SweepResult {
  uint64_t candidates = 0;
  uint64_t mismatches = 0;
  std::optional<uint64_t> first_match;  // candidate index with equal gamma
  size_t target_gamma_size = 0;
};

// Compares the bounded concretisation set of every pointed KMTS with at most
// `size` states against that of <against, s>.
SweepResult kmts_sweep(const Gts& against, const std::string& s, int size, int bound,
                       const std::vector<std::string>& ap);

}  // namespace mucheck
