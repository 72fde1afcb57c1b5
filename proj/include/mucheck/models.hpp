// models.hpp — finite modal models: Kripke Structures (KS), Kripke Modal
// Transition Systems (KMTS) and their generalisation with must
// hypertransitions (GTS), plus the text format used by the CLI.
//
// States are kept in declaration order and addressed by index internally;
// state sets are 64-bit masks, so models are limited to 64 states.
// Labels are stored as positive/negative bit pairs over the declared
// proposition list.
//
// Model text format:
//
//   model gts g {
//     ap: a;
//     states: s, q;
//     init: s;
//     label s: a;
//     label q: !a;
//     may s -> s;
//     may s -> q;
//     must s -> {s, q};
//   }
//
// `model ks` requires a total labelling and lists its transitions as `may`
// edges (musts are implicit); `model kmts` requires singleton must targets.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mucheck/formula.hpp"

namespace mucheck {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelKind { KS, KMTS, GTS };

std::string to_string(ModelKind k);

using StateSet = uint64_t;  // bit i = state with index i

struct LabelSet {
  uint32_t pos = 0;  // bit j: proposition j holds
  uint32_t neg = 0;  // bit j: proposition j is negated

  bool operator==(const LabelSet&) const = default;
  bool contains(const LabelSet& other) const {
    return (other.pos & ~pos) == 0 && (other.neg & ~neg) == 0;
  }
};

struct Gts {
  std::string name = "m";
  std::vector<std::string> states;
  std::vector<std::string> ap;
  StateSet init = 0;
  std::vector<LabelSet> labels;            // per state
  std::vector<StateSet> may;               // may[s] = successor mask
  std::vector<std::vector<StateSet>> must; // must[s] = sorted unique target masks

  int state_count() const { return static_cast<int>(states.size()); }
  std::optional<int> state_index(const std::string& name) const;
  int require_state(const std::string& name) const;  // throws ModelError
  std::optional<int> ap_index(const std::string& prop) const;

  // Literal view of one state's labels.
  std::vector<Literal> label_literals(int s) const;

  // Checks the structural invariants (init within states, must targets
  // nonempty and covered by may, consistent labels).  Throws ModelError.
  void check() const;

  bool operator==(const Gts& other) const;
};

struct Ks {
  std::string name = "k";
  std::vector<std::string> states;
  std::vector<std::string> ap;
  StateSet init = 0;
  std::vector<LabelSet> labels;
  std::vector<StateSet> trans;

  int state_count() const { return static_cast<int>(states.size()); }
  std::optional<int> state_index(const std::string& name) const;
  int require_state(const std::string& name) const;
  void check() const;  // additionally requires a total labelling
  bool operator==(const Ks& other) const;
};

// Classification by the validation ladder: every valid Gts is a GTS, it is a
// KMTS when all must targets are singletons, and a KS when additionally the
// labelling is total and musts mirror the may relation exactly.
ModelKind validate(const Gts& m);

Gts embed_ks(const Ks& k);
int model_size(const Gts& m);
int model_size(const Ks& k);

struct ParsedModel {
  ModelKind declared;
  std::optional<Ks> ks;    // set when declared == KS
  std::optional<Gts> gts;  // set otherwise

  // The model as a Gts regardless of declared kind (KSs are embedded).
  Gts as_gts() const { return ks ? embed_ks(*ks) : *gts; }
};

ParsedModel parse_model(const std::string& text);
std::string serialize(const Ks& k);
std::string serialize(const Gts& m);
std::string to_dot(const Gts& m);

// Equality of the underlying structure by state name, ignoring declaration
// order and model names.
bool same_model(const Gts& a, const Gts& b);

}  // namespace mucheck
