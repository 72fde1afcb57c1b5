// abstraction.hpp — abstraction transformations and settings.
//
// gtok splits every proper must hypertransition (p, A) off into a fresh
// state p_A that stands for "some member of A": p keeps a singleton must
// into p_A, p_A is labelled with what the members agree on, and p_A may-steps
// wherever some member could.  Two may-edge policies are provided, since
// either yields the same contextual concretisations: keep_may retains all
// original may edges, figure_faithful drops the source's may edges into A.
//
// steps_abstraction collapses a Kripke structure along the distance to the
// nearest prop-state, producing a KMTS whose must chain counts that distance
// down to zero.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mucheck/models.hpp"

namespace mucheck {

struct AbstractionSetting {
  std::string name = "setting";
  std::vector<std::string> concrete_states;  // C
  std::vector<std::string> abstract_states;  // S
  std::vector<std::pair<std::string, std::string>> rho;  // subset of C x S
};

struct StateMap {
  // Hyper target (member names in source declaration order) -> fresh state.
  std::vector<std::pair<std::vector<std::string>, std::string>> entries;

  std::optional<std::string> fresh_name(const std::vector<std::string>& members) const;
};

enum class GtokMode { KeepMay, FigureFaithful };

std::pair<Gts, StateMap> gtok(const Gts& g, GtokMode mode);

// rho' = rho plus (c, p_A) whenever c relates to some member of A.
AbstractionSetting extend_rho(const AbstractionSetting& setting, const StateMap& map,
                              const Gts& source);

Gts steps_abstraction(const Ks& k, const std::string& prop);

// Validates the setting; when a witness concrete model and the abstract
// model are supplied, additionally requires rho (restricted to their states)
// to be a mixed simulation between them.
AbstractionSetting make_setting(std::vector<std::string> concrete,
                                std::vector<std::pair<std::string, std::string>> rho,
                                std::vector<std::string> abstract,
                                const Ks* witness = nullptr,
                                const Gts* abstract_model = nullptr);

AbstractionSetting parse_setting(const std::string& text);
std::string serialize(const AbstractionSetting& s);

}  // namespace mucheck
