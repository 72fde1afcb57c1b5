#include "mucheck/approximant.hpp"

#include <algorithm>

namespace mucheck {

namespace {

// Body of the binder for the exact indexed variable v inside psi.
bool find_binder_body(const VarName& v, const Formula& psi, Formula& out) {
  if (psi.is_binder() && psi.var_name() == v) {
    out = psi.child();
    return true;
  }
  switch (psi.kind()) {
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return find_binder_body(v, psi.child(), out) ||
             find_binder_body(v, psi.right(), out);
    case Formula::Kind::Box:
    case Formula::Kind::Diamond:
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      return find_binder_body(v, psi.child(), out);
    default:
      return false;
  }
}

Formula unfold_exact(const VarName& v, const Formula& psi) {
  Formula out;
  if (!find_binder_body(v, psi, out))
    throw std::runtime_error("variable " + v.str() + " is not bound in the formula");
  return out;
}

Formula approx_var_rec(const Formula& f, const std::string& x, int k,
                       const Formula& psi) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Lit:
      return f;
    case Formula::Kind::Var: {
      const VarName& v = f.var_name();
      if (v.base == x)
        return k == 0 ? Formula::falsity()
                      : approx_var_rec(unfold_exact(v, psi), x, k - 1, psi);
      return Formula::var(v.with_appended(k));
    }
    case Formula::Kind::And:
      return Formula::conj(approx_var_rec(f.child(), x, k, psi),
                           approx_var_rec(f.right(), x, k, psi));
    case Formula::Kind::Or:
      return Formula::disj(approx_var_rec(f.child(), x, k, psi),
                           approx_var_rec(f.right(), x, k, psi));
    case Formula::Kind::Box:
      return Formula::box(approx_var_rec(f.child(), x, k, psi));
    case Formula::Kind::Diamond:
      return Formula::diamond(approx_var_rec(f.child(), x, k, psi));
    case Formula::Kind::Mu: {
      const VarName& v = f.var_name();
      if (v.base == x) {
        // Binder of the variable being approximated: at budget 0 the whole
        // fixpoint collapses to false; otherwise the binder is dropped and
        // its body processed at the same budget.
        return k == 0 ? Formula::falsity() : approx_var_rec(f.child(), x, k, psi);
      }
      return Formula::mu(v.with_appended(k), approx_var_rec(f.child(), x, k, psi));
    }
    case Formula::Kind::Nu: {
      const VarName& v = f.var_name();
      if (v.base == x)
        throw std::runtime_error("variable " + v.str() + " is nu-bound, not mu-bound");
      return Formula::nu(v.with_appended(k), approx_var_rec(f.child(), x, k, psi));
    }
  }
  throw std::runtime_error("malformed formula");
}

// First preorder position of the binder subformula for variable v.
bool binder_position(const Formula& f, const VarName& v, int& pos) {
  ++pos;
  if (f.is_binder() && f.var_name() == v) return true;
  switch (f.kind()) {
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return binder_position(f.child(), v, pos) || binder_position(f.right(), v, pos);
    case Formula::Kind::Box:
    case Formula::Kind::Diamond:
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      return binder_position(f.child(), v, pos);
    default:
      return false;
  }
}

}  // namespace

Formula approx_var(const Formula& f, const std::string& x_base, int k,
                   const Formula& psi) {
  if (k < 0) throw std::invalid_argument("negative approximation budget");
  if (!analyze(psi).well_formed)
    throw std::runtime_error("approx_var requires a well-formed formula");
  return approx_var_rec(f, x_base, k, psi);
}

Formula approx(const Formula& f, const ApproxBudget& alpha) {
  Formula cur = f;
  // Each round eliminates every indexed copy of one base name, so the number
  // of rounds is bounded by the number of distinct mu bases.
  size_t guard = analyze(f).mu_vars.size() + 1;
  for (size_t round = 0; round <= guard; ++round) {
    FormulaInfo info = analyze(cur);
    if (info.mu_vars.empty()) return cur;
    if (round == guard) break;

    // Candidates: mu-variables whose binder is not a subformula of another
    // mu-variable's unfolding.
    std::vector<VarName> mu(info.mu_vars.begin(), info.mu_vars.end());
    std::vector<Formula> binders;
    std::vector<Formula> bodies;
    for (const VarName& v : mu) {
      for (const Formula& g : info.sub)
        if (g.kind() == Formula::Kind::Mu && g.var_name() == v) {
          binders.push_back(g);
          bodies.push_back(g.child());
          break;
        }
    }
    const VarName* best = nullptr;
    int best_pos = 0;
    for (size_t i = 0; i < mu.size(); ++i) {
      bool outermost = true;
      for (size_t j = 0; j < mu.size() && outermost; ++j) {
        if (j == i) continue;
        FormulaInfo sub_j = analyze(bodies[j]);
        for (const Formula& g : sub_j.sub)
          if (g == binders[i]) {
            outermost = false;
            break;
          }
      }
      if (!outermost) continue;
      int pos = 0;
      binder_position(cur, mu[i], pos);
      if (!best || pos < best_pos) {
        best = &mu[i];
        best_pos = pos;
      }
    }
    if (!best) throw std::runtime_error("no outermost mu-variable found");

    auto it = alpha.find(best->base);
    if (it == alpha.end())
      throw std::runtime_error("no budget for mu-variable base '" + best->base + "'");
    cur = approx_var(cur, best->base, it->second, cur);
  }
  throw std::runtime_error("approximation did not terminate");
}

ApproxBudget uniform_alpha(const Formula& f, int k) {
  ApproxBudget alpha;
  for (const VarName& v : analyze(f).mu_vars) alpha[v.base] = k;
  return alpha;
}

WitnessReport witness_check(const Gts& g, const Formula& f) {
  if (!f.closed()) throw EvalError("witness_check requires a closed formula");
  WitnessReport r;
  r.approximant = approx(f, uniform_alpha(f, model_size(g)));

  SisEvaluator eval;
  eval.reset(g);
  StateSet lhs = eval.tt(f);
  StateSet rhs = eval.tt(r.approximant);
  r.lhs_true = (g.init & ~lhs) == 0;
  r.rhs_true = (g.init & ~rhs) == 0;
  r.agree = r.lhs_true == r.rhs_true;
  return r;
}

}  // namespace mucheck
