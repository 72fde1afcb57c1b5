// semantics.hpp — fixpoint evaluation of mu-calculus formulas.
//
// Two independent evaluators are provided: the classic two-valued semantics
// on Kripke structures, and the inductive three-valued semantics on GTSs,
// which computes a truth set and a falsity set per formula.  On the
// three-valued side <> is witnessed by must hypertransitions (some target
// set fully inside the argument) and [] ranges over may successors.
//
// Fixpoints iterate from the empty/full set; nested fixpoints recompute
// naively.  Closed subformulas are memoised per evaluation, which keeps the
// exhaustive test sweeps affordable without changing any result.

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mucheck/formula.hpp"
#include "mucheck/models.hpp"

namespace mucheck {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ThreeValued { True, False, Unknown };
std::string to_string(ThreeValued v);

class Environment {
 public:
  Environment() = default;
  Environment& bind(VarName v, StateSet u) {
    bindings_.emplace_back(std::move(v), u);
    return *this;
  }
  const std::vector<std::pair<VarName, StateSet>>& bindings() const { return bindings_; }

 private:
  std::vector<std::pair<VarName, StateSet>> bindings_;
};

// One iterate sequence of a single fixpoint evaluation, in evaluation order.
struct FixpointTrace {
  VarName var;
  bool least = false;
  std::vector<StateSet> iterates;  // successive values, first = start set
};

struct EvalOptions {
  std::vector<FixpointTrace>* trace = nullptr;
};

StateSet eval_ks(const Ks& k, const Formula& f, const Environment& env = {},
                 const EvalOptions& opts = {});

struct SisResult {
  StateSet tt = 0;
  StateSet ff = 0;
};

SisResult eval_sis(const Gts& g, const Formula& f, const Environment& env_tt = {},
                   const Environment& env_ff = {}, const EvalOptions& opts = {});

ThreeValued verdict(const Gts& g, const std::string& state, const Formula& f);

// Reusable three-valued evaluator for enumeration sweeps: construct once,
// point it at successive models with reset(), and query truth/falsity sets.
// Results are identical to eval_sis.
class SisEvaluator {
 public:
  SisEvaluator() = default;
  void reset(const Gts& g);
  StateSet tt(const Formula& f, const Environment& env = {});
  StateSet ff(const Formula& f, const Environment& env = {});
  void set_trace(std::vector<FixpointTrace>* t) { trace_ = t; }

 private:
  StateSet rec(const Formula& f, bool truth_side);
  StateSet fixpoint(const Formula& f, bool truth_side, bool least);
  StateSet lit_set(const Literal& l, bool truth_side) const;
  StateSet diamond_must(StateSet u) const;
  StateSet box_may(StateSet u) const;
  void load_env(const Environment& env);

  const Gts* g_ = nullptr;
  int n_ = 0;
  StateSet all_ = 0;
  std::vector<StateSet> lit_pos_, lit_neg_;               // per ap index
  std::vector<std::pair<const VarName*, StateSet>> env_;  // binding stack
  std::vector<VarName> env_storage_;                      // owns names from Environment
  std::unordered_map<uint64_t, StateSet> memo_;           // node id * 2 + side
  std::vector<FixpointTrace>* trace_ = nullptr;
};

}  // namespace mucheck
