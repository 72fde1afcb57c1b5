// approximant.hpp — least-fixpoint-free syntactic approximants.
//
// approx_var expands one family of mu-variables (all indexed copies of one
// base name) up to a budget: an occurrence with budget k > 0 is replaced by
// the budget-(k-1) expansion of its binder body, occurrences and binders at
// budget 0 become false, and every other variable or binder passed through
// gets the current budget appended to its index word so that duplicated
// binders in different expansion copies keep distinct names.
//
// approx repeats this, always picking a mu-variable whose binder is not
// inside the unfolding of another mu-variable (leftmost binder on ties),
// until no mu-binder remains.

#pragma once

#include <map>
#include <string>

#include "mucheck/formula.hpp"
#include "mucheck/models.hpp"
#include "mucheck/semantics.hpp"

namespace mucheck {

// Budget per base variable name; indexed copies share their base's budget.
using ApproxBudget = std::map<std::string, int>;

Formula approx_var(const Formula& f, const std::string& x_base, int k,
                   const Formula& psi);

Formula approx(const Formula& f, const ApproxBudget& alpha);

ApproxBudget uniform_alpha(const Formula& f, int k);

struct WitnessReport {
  bool lhs_true = false;  // the formula holds at every initial state
  bool rhs_true = false;  // its size-budget approximant does
  bool agree = false;
  Formula approximant;
};

WitnessReport witness_check(const Gts& g, const Formula& f);

}  // namespace mucheck
