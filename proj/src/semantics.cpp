#include "mucheck/semantics.hpp"

#include <algorithm>

namespace mucheck {

std::string to_string(ThreeValued v) {
  switch (v) {
    case ThreeValued::True: return "true";
    case ThreeValued::False: return "false";
    case ThreeValued::Unknown: return "unknown";
  }
  return "?";
}

namespace {

StateSet full_mask(int n) { return n >= 64 ? ~0ull : (1ull << n) - 1; }

int find_ap(const std::vector<std::string>& ap, const std::string& name) {
  for (size_t j = 0; j < ap.size(); ++j)
    if (ap[j] == name) return static_cast<int>(j);
  throw EvalError("formula uses proposition '" + name +
                  "' which the model does not declare");
}

}  // namespace

// ---------------------------------------------------------------------------
// Two-valued semantics on Kripke structures

namespace {

class KsEvaluator {
 public:
  KsEvaluator(const Ks& k, const EvalOptions& opts) : k_(k), trace_(opts.trace) {
    all_ = full_mask(k.state_count());
  }

  StateSet eval(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::True:
        return all_;
      case Formula::Kind::False:
        return 0;
      case Formula::Kind::Lit: {
        int j = find_ap(k_.ap, f.literal().name);
        StateSet r = 0;
        for (int s = 0; s < k_.state_count(); ++s) {
          uint32_t bits = f.literal().negated ? k_.labels[s].neg : k_.labels[s].pos;
          if (bits >> j & 1) r |= 1ull << s;
        }
        return r;
      }
      case Formula::Kind::Var: {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
          if (it->first == f.var_name()) return it->second;
        throw EvalError("unbound variable " + f.var_name().str());
      }
      case Formula::Kind::And:
        return eval(f.child()) & eval(f.right());
      case Formula::Kind::Or:
        return eval(f.child()) | eval(f.right());
      case Formula::Kind::Diamond: {
        StateSet u = eval(f.child());
        StateSet r = 0;
        for (int s = 0; s < k_.state_count(); ++s)
          if (k_.trans[s] & u) r |= 1ull << s;
        return r;
      }
      case Formula::Kind::Box: {
        StateSet u = eval(f.child());
        StateSet r = 0;
        for (int s = 0; s < k_.state_count(); ++s)
          if ((k_.trans[s] & ~u) == 0) r |= 1ull << s;
        return r;
      }
      case Formula::Kind::Mu:
        return fixpoint(f, true);
      case Formula::Kind::Nu:
        return fixpoint(f, false);
    }
    throw EvalError("malformed formula");
  }

  void bind(const Environment& env) {
    for (const auto& [v, u] : env.bindings()) env_.emplace_back(v, u);
  }

 private:
  StateSet fixpoint(const Formula& f, bool least) {
    StateSet u = least ? 0 : all_;
    size_t trace_slot = 0;
    if (trace_) {
      trace_slot = trace_->size();
      trace_->push_back(FixpointTrace{f.var_name(), least, {u}});
    }
    size_t slot = env_.size();
    env_.emplace_back(f.var_name(), u);
    for (;;) {
      env_[slot].second = u;
      StateSet v = eval(f.child());
      if (trace_) (*trace_)[trace_slot].iterates.push_back(v);
      if (v == u) break;
      u = v;
    }
    env_.pop_back();
    return u;
  }

  const Ks& k_;
  StateSet all_;
  std::vector<std::pair<VarName, StateSet>> env_;
  std::vector<FixpointTrace>* trace_;
};

}  // namespace

StateSet eval_ks(const Ks& k, const Formula& f, const Environment& env,
                 const EvalOptions& opts) {
  k.check();
  KsEvaluator e(k, opts);
  e.bind(env);
  return e.eval(f);
}

// ---------------------------------------------------------------------------
// Three-valued inductive semantics on GTSs

void SisEvaluator::reset(const Gts& g) {
  g_ = &g;
  n_ = g.state_count();
  all_ = full_mask(n_);
  lit_pos_.assign(g.ap.size(), 0);
  lit_neg_.assign(g.ap.size(), 0);
  for (int s = 0; s < n_; ++s)
    for (size_t j = 0; j < g.ap.size(); ++j) {
      if (g.labels[s].pos >> j & 1) lit_pos_[j] |= 1ull << s;
      if (g.labels[s].neg >> j & 1) lit_neg_[j] |= 1ull << s;
    }
  memo_.clear();
  env_.clear();
  env_storage_.clear();
}

void SisEvaluator::load_env(const Environment& env) {
  env_.clear();
  env_storage_.clear();
  env_storage_.reserve(env.bindings().size());
  for (const auto& [v, u] : env.bindings()) {
    env_storage_.push_back(v);
    env_.emplace_back(&env_storage_.back(), u);
  }
}

StateSet SisEvaluator::lit_set(const Literal& l, bool truth_side) const {
  int j = find_ap(g_->ap, l.name);
  // Truth set of l; falsity set of l is the truth set of its complement.
  bool want_neg = truth_side ? l.negated : !l.negated;
  return want_neg ? lit_neg_[j] : lit_pos_[j];
}

StateSet SisEvaluator::diamond_must(StateSet u) const {
  StateSet r = 0;
  for (int s = 0; s < n_; ++s)
    for (StateSet a : g_->must[s])
      if ((a & ~u) == 0) {
        r |= 1ull << s;
        break;
      }
  return r;
}

StateSet SisEvaluator::box_may(StateSet u) const {
  StateSet r = 0;
  for (int s = 0; s < n_; ++s)
    if ((g_->may[s] & ~u) == 0) r |= 1ull << s;
  return r;
}

StateSet SisEvaluator::fixpoint(const Formula& f, bool truth_side, bool least) {
  StateSet u = least ? 0 : all_;
  size_t trace_slot = 0;
  if (trace_) {
    trace_slot = trace_->size();
    trace_->push_back(FixpointTrace{f.var_name(), least, {u}});
  }
  size_t slot = env_.size();
  env_.emplace_back(&f.var_name(), u);
  for (;;) {
    env_[slot].second = u;
    StateSet v = rec(f.child(), truth_side);
    if (trace_) (*trace_)[trace_slot].iterates.push_back(v);
    if (v == u) break;
    u = v;
  }
  env_.pop_back();
  return u;
}

StateSet SisEvaluator::rec(const Formula& f, bool truth_side) {
  // Closed subformulas are environment-independent; memoise per model.
  bool memoable = f.closed();
  uint64_t key = 0;
  if (memoable) {
    key = static_cast<uint64_t>(f.id()) * 2 + (truth_side ? 1 : 0);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }

  StateSet r;
  switch (f.kind()) {
    case Formula::Kind::True:
      r = truth_side ? all_ : 0;
      break;
    case Formula::Kind::False:
      r = truth_side ? 0 : all_;
      break;
    case Formula::Kind::Lit:
      r = lit_set(f.literal(), truth_side);
      break;
    case Formula::Kind::Var: {
      const VarName* found = nullptr;
      StateSet u = 0;
      for (auto it = env_.rbegin(); it != env_.rend(); ++it)
        if (*it->first == f.var_name()) {
          found = it->first;
          u = it->second;
          break;
        }
      if (!found) throw EvalError("unbound variable " + f.var_name().str());
      r = u;
      break;
    }
    case Formula::Kind::And:
      r = truth_side ? (rec(f.child(), true) & rec(f.right(), true))
                     : (rec(f.child(), false) | rec(f.right(), false));
      break;
    case Formula::Kind::Or:
      r = truth_side ? (rec(f.child(), true) | rec(f.right(), true))
                     : (rec(f.child(), false) & rec(f.right(), false));
      break;
    case Formula::Kind::Diamond:
      r = truth_side ? diamond_must(rec(f.child(), true))
                     : box_may(rec(f.child(), false));
      break;
    case Formula::Kind::Box:
      r = truth_side ? box_may(rec(f.child(), true))
                     : diamond_must(rec(f.child(), false));
      break;
    case Formula::Kind::Mu:
      // Truth of a least fixpoint is a least fixpoint; its falsity set is a
      // greatest fixpoint, and dually for nu.
      r = fixpoint(f, truth_side, truth_side);
      break;
    case Formula::Kind::Nu:
      r = fixpoint(f, truth_side, !truth_side);
      break;
    default:
      throw EvalError("malformed formula");
  }

  if (memoable) memo_[key] = r;
  return r;
}

StateSet SisEvaluator::tt(const Formula& f, const Environment& env) {
  load_env(env);
  return rec(f, true);
}

StateSet SisEvaluator::ff(const Formula& f, const Environment& env) {
  load_env(env);
  return rec(f, false);
}

SisResult eval_sis(const Gts& g, const Formula& f, const Environment& env_tt,
                   const Environment& env_ff, const EvalOptions& opts) {
  g.check();
  SisEvaluator e;
  e.reset(g);
  e.set_trace(opts.trace);
  SisResult r;
  r.tt = e.tt(f, env_tt);
  r.ff = e.ff(f, env_ff);
  return r;
}

ThreeValued verdict(const Gts& g, const std::string& state, const Formula& f) {
  if (!f.closed())
    throw EvalError("verdict requires a closed formula (free: " +
                    f.free_vars().front().str() + ")");
  int s = g.require_state(state);
  SisResult r = eval_sis(g, f);
  if (r.tt >> s & 1) return ThreeValued::True;
  if (r.ff >> s & 1) return ThreeValued::False;
  return ThreeValued::Unknown;
}

}  // namespace mucheck
