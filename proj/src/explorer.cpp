#include "mucheck/explorer.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "mucheck/parallel.hpp"

namespace mucheck {

// ---------------------------------------------------------------------------
// Worker pool helpers

int thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("MUCHECK_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min<int>(v, 256);
  }
  return static_cast<int>(hw);
}

void parallel_tasks(size_t tasks, const std::function<void(size_t)>& fn) {
  int workers = std::min<size_t>(thread_budget(), tasks);
  if (workers <= 1) {
    for (size_t i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto drain = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& t : pool) t.join();
}

void parallel_chunks(uint64_t count,
                     const std::function<void(size_t, uint64_t, uint64_t)>& fn) {
  if (count == 0) return;
  // Chunk boundaries are fixed so that per-chunk results are reproducible
  // whatever the worker count.
  uint64_t chunks = std::min<uint64_t>(count, 64);
  uint64_t per = (count + chunks - 1) / chunks;
  parallel_tasks(static_cast<size_t>(chunks), [&](size_t c) {
    uint64_t b = c * per;
    uint64_t e = std::min(count, b + per);
    if (b < e) fn(c, b, e);
  });
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

uint64_t ipow(uint64_t b, uint64_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<std::string> canonical_states(int n) {
  std::vector<std::string> s;
  for (int i = 0; i < n; ++i) s.push_back("s" + std::to_string(i));
  return s;
}

// Number of must families of one state with may-successor mask m.
// KMTS: any subset of singleton targets; GTS: any subset of the nonempty
// subsets of the successor set.
uint64_t family_count(ModelKind kind, StateSet m) {
  int b = __builtin_popcountll(m);
  return kind == ModelKind::KMTS ? ipow(2, b) : ipow(2, ipow(2, b) - 1);
}

// Nonempty submasks of m, ascending.
std::vector<StateSet> nonempty_submasks(StateSet m) {
  std::vector<StateSet> out;
  for (StateSet x = 1; x <= m; ++x)
    if ((x & ~m) == 0) out.push_back(x);
  return out;
}

void family_assign(ModelKind kind, StateSet maysucc, uint64_t family,
                   const std::vector<StateSet>& submasks, std::vector<StateSet>& out) {
  out.clear();
  if (kind == ModelKind::KMTS) {
    for (int t = 0; t < 64 && (maysucc >> t) != 0; ++t) {
      if (!(maysucc >> t & 1)) continue;
      if (family & 1) out.push_back(1ull << t);
      family >>= 1;
    }
  } else {
    for (size_t i = 0; i < submasks.size(); ++i)
      if (family >> i & 1) out.push_back(submasks[i]);
  }
}

uint64_t ks_slice(int n, int props) { return ipow(2, props * n) * ipow(2, n * n); }

uint64_t modal_slice(ModelKind kind, int n, int props) {
  // sum over per-state successor sets of the family counts, raised to the
  // number of states, times the partial labellings.
  uint64_t per_state = 0;
  for (int b = 0; b <= n; ++b) {
    uint64_t choose = 1;
    for (int i = 0; i < b; ++i) choose = choose * (n - i) / (i + 1);
    per_state += choose * (kind == ModelKind::KMTS ? ipow(2, b) : ipow(2, ipow(2, b) - 1));
  }
  return ipow(3, props * n) * ipow(per_state, n);
}

void apply_ks_labels(Ks& k, int n, int props, uint64_t labeling) {
  for (int s = n - 1; s >= 0; --s) {
    uint64_t code = labeling % ipow(2, props);
    labeling /= ipow(2, props);
    k.labels[s].pos = static_cast<uint32_t>(code);
    k.labels[s].neg = static_cast<uint32_t>(~code & ((1u << props) - 1));
  }
}

void apply_edges(std::vector<StateSet>& trans, int n, uint64_t edges) {
  for (int s = 0; s < n; ++s) {
    StateSet row = 0;
    for (int t = 0; t < n; ++t)
      if (edges >> (s * n + t) & 1) row |= 1ull << t;
    trans[s] = row;
  }
}

bool enumerate_ks_canonical(const EnumUniverse& u, uint64_t& idx, const EnumCallback& fn) {
  int props = static_cast<int>(u.ap.size());
  Ks k;
  k.ap = u.ap;
  for (int n = 1; n <= u.max_states; ++n) {
    k.states = canonical_states(n);
    k.labels.assign(n, LabelSet{});
    k.trans.assign(n, 0);
    k.init = u.pointed ? 1 : (n == 64 ? ~0ull : (1ull << n) - 1);
    uint64_t labelings = ipow(2, props * n);
    uint64_t edge_count = ipow(2, n * n);
    for (uint64_t l = 0; l < labelings; ++l) {
      apply_ks_labels(k, n, props, l);
      for (uint64_t e = 0; e < edge_count; ++e) {
        apply_edges(k.trans, n, e);
        if (!fn(idx++, &k, nullptr)) return false;
      }
    }
  }
  return true;
}

bool enumerate_ks_fixed(const EnumUniverse& u, uint64_t& idx, const EnumCallback& fn) {
  int n = static_cast<int>(u.fixed_states.size());
  int props = static_cast<int>(u.ap.size());
  Ks k;
  k.ap = u.ap;
  k.states = u.fixed_states;
  k.labels.assign(n, LabelSet{});
  k.trans.assign(n, 0);
  uint64_t labelings = ipow(2, props * n);
  uint64_t edge_count = ipow(2, static_cast<uint64_t>(n) * n);
  for (int point = 0; point < n; ++point) {
    k.init = 1ull << point;
    for (uint64_t l = 0; l < labelings; ++l) {
      apply_ks_labels(k, n, props, l);
      for (uint64_t e = 0; e < edge_count; ++e) {
        apply_edges(k.trans, n, e);
        if (!fn(idx++, &k, nullptr)) return false;
      }
    }
  }
  return true;
}

void apply_modal_labels(Gts& g, int n, int props, uint64_t labeling) {
  for (int s = n - 1; s >= 0; --s) {
    uint64_t code = labeling % ipow(3, props);
    labeling /= ipow(3, props);
    g.labels[s] = LabelSet{};
    for (int j = 0; j < props; ++j) {
      uint64_t trit = code % 3;
      code /= 3;
      if (trit == 1) g.labels[s].pos |= 1u << j;
      if (trit == 2) g.labels[s].neg |= 1u << j;
    }
  }
}

bool enumerate_modal(const EnumUniverse& u, uint64_t& idx, const EnumCallback& fn) {
  int props = static_cast<int>(u.ap.size());
  Gts g;
  g.ap = u.ap;
  for (int n = 1; n <= u.max_states; ++n) {
    g.states = canonical_states(n);
    g.labels.assign(n, LabelSet{});
    g.may.assign(n, 0);
    g.must.assign(n, {});
    g.init = u.pointed ? 1 : (n == 64 ? ~0ull : (1ull << n) - 1);
    uint64_t labelings = ipow(3, props * n);
    uint64_t edge_count = ipow(2, n * n);
    for (uint64_t l = 0; l < labelings; ++l) {
      apply_modal_labels(g, n, props, l);
      for (uint64_t e = 0; e < edge_count; ++e) {
        apply_edges(g.may, n, e);
        std::vector<std::vector<StateSet>> submasks(n);
        std::vector<uint64_t> family(n, 0), family_max(n);
        for (int s = 0; s < n; ++s) {
          submasks[s] = nonempty_submasks(g.may[s]);
          family_max[s] = family_count(u.kind, g.may[s]);
        }
        // Odometer over per-state families, state 0 most significant.
        for (;;) {
          for (int s = 0; s < n; ++s)
            family_assign(u.kind, g.may[s], family[s], submasks[s], g.must[s]);
          if (!fn(idx++, nullptr, &g)) return false;
          int s = n - 1;
          while (s >= 0) {
            if (++family[s] < family_max[s]) break;
            family[s] = 0;
            --s;
          }
          if (s < 0) break;
        }
      }
    }
  }
  return true;
}

}  // namespace

namespace {

void check_enumerable(const EnumUniverse& u) {
  int n = u.fixed_states.empty() ? u.max_states
                                 : static_cast<int>(u.fixed_states.size());
  int props = static_cast<int>(u.ap.size());
  if (n < 1) throw ModelError("universe needs at least one state");
  // Caps keep the size arithmetic inside 64 bits; the modal family spaces
  // are doubly exponential in the state count.
  bool modal = u.fixed_states.empty() && u.kind != ModelKind::KS;
  if ((modal && n > 4) || n > 7 || props * n > 20)
    throw ModelError("universe too large to enumerate");
}

}  // namespace

uint64_t universe_slice_size(const EnumUniverse& u, int n) {
  check_enumerable(u);
  int props = static_cast<int>(u.ap.size());
  if (!u.fixed_states.empty()) {
    int m = static_cast<int>(u.fixed_states.size());
    return n == m ? static_cast<uint64_t>(m) * ks_slice(m, props) : 0;
  }
  if (u.kind == ModelKind::KS) return ks_slice(n, props);
  return modal_slice(u.kind, n, props);
}

uint64_t universe_size(const EnumUniverse& u) {
  if (!u.fixed_states.empty())
    return universe_slice_size(u, static_cast<int>(u.fixed_states.size()));
  uint64_t total = 0;
  for (int n = 1; n <= u.max_states; ++n) total += universe_slice_size(u, n);
  return total;
}

void enumerate(const EnumUniverse& u, const EnumCallback& fn) {
  check_enumerable(u);
  uint64_t idx = 0;
  if (!u.fixed_states.empty()) {
    enumerate_ks_fixed(u, idx, fn);
    return;
  }
  if (u.kind == ModelKind::KS) {
    enumerate_ks_canonical(u, idx, fn);
    return;
  }
  enumerate_modal(u, idx, fn);
}

Ks universe_ks(const EnumUniverse& u, uint64_t idx) {
  if (u.kind != ModelKind::KS)
    throw ModelError("universe does not enumerate Kripke structures");
  int props = static_cast<int>(u.ap.size());
  Ks k;
  k.ap = u.ap;
  if (!u.fixed_states.empty()) {
    int n = static_cast<int>(u.fixed_states.size());
    uint64_t edge_count = ipow(2, static_cast<uint64_t>(n) * n);
    uint64_t labelings = ipow(2, props * n);
    uint64_t per_point = labelings * edge_count;
    if (idx >= static_cast<uint64_t>(n) * per_point)
      throw ModelError("universe index out of range");
    k.states = u.fixed_states;
    k.labels.assign(n, LabelSet{});
    k.trans.assign(n, 0);
    k.init = 1ull << (idx / per_point);
    uint64_t rest = idx % per_point;
    apply_ks_labels(k, n, props, rest / edge_count);
    apply_edges(k.trans, n, rest % edge_count);
    return k;
  }
  for (int n = 1; n <= u.max_states; ++n) {
    uint64_t slice = ks_slice(n, props);
    if (idx >= slice) {
      idx -= slice;
      continue;
    }
    uint64_t edge_count = ipow(2, n * n);
    k.states = canonical_states(n);
    k.labels.assign(n, LabelSet{});
    k.trans.assign(n, 0);
    k.init = u.pointed ? 1 : (n == 64 ? ~0ull : (1ull << n) - 1);
    apply_ks_labels(k, n, props, idx / edge_count);
    apply_edges(k.trans, n, idx % edge_count);
    return k;
  }
  throw ModelError("universe index out of range");
}

Gts universe_gts(const EnumUniverse& u, uint64_t idx) {
  if (u.kind == ModelKind::KS) return embed_ks(universe_ks(u, idx));
  Gts out;
  bool found = false;
  enumerate(u, [&](uint64_t i, const Ks*, const Gts* g) {
    if (i == idx) {
      out = *g;
      found = true;
      return false;
    }
    return true;
  });
  if (!found) throw ModelError("universe index out of range");
  return out;
}

std::optional<uint64_t> universe_index_of(const EnumUniverse& u, const Ks& k) {
  if (u.kind != ModelKind::KS) return std::nullopt;
  int props = static_cast<int>(u.ap.size());
  int n = k.state_count();
  uint64_t labeling = 0, edges = 0;
  for (int s = 0; s < n; ++s) {
    labeling = labeling * ipow(2, props) + k.labels[s].pos;
    for (int t = 0; t < n; ++t)
      if (k.trans[s] >> t & 1) edges |= 1ull << (s * n + t);
  }
  uint64_t edge_count = ipow(2, static_cast<uint64_t>(n) * n);
  if (!u.fixed_states.empty()) {
    if (k.states != u.fixed_states || __builtin_popcountll(k.init) != 1)
      return std::nullopt;
    uint64_t point = static_cast<uint64_t>(__builtin_ctzll(k.init));
    return (point * ipow(2, props * n) + labeling) * edge_count + edges;
  }
  if (n > u.max_states) return std::nullopt;
  uint64_t offset = 0;
  for (int m = 1; m < n; ++m) offset += ks_slice(m, props);
  return offset + labeling * edge_count + edges;
}

// ---------------------------------------------------------------------------
// Bounded concretisation sets

BoundedGamma gamma_bounded(const Gts& m, const std::string& s, const EnumUniverse& u) {
  if (u.kind != ModelKind::KS || !u.pointed || !u.fixed_states.empty())
    throw ModelError("gamma_bounded expects a pointed Kripke universe");
  m.check();
  int target = m.require_state(s);

  BoundedGamma gamma;
  gamma.universe = u;
  uint64_t total = universe_size(u);
  std::vector<std::vector<uint64_t>> found(64);
  parallel_chunks(total, [&](size_t chunk, uint64_t begin, uint64_t end) {
    for (uint64_t i = begin; i < end; ++i) {
      Gts k = embed_ks(universe_ks(u, i));
      RelMasks rel = maximal_mixed_simulation_masks(k, m);
      if (rel[0] >> target & 1) found[chunk].push_back(i);
    }
  });
  for (const auto& chunk : found)
    gamma.members.insert(gamma.members.end(), chunk.begin(), chunk.end());
  return gamma;
}

BoundedGamma gamma_contextual(const AbstractionSetting& setting, const Gts& m,
                              const std::string& s) {
  m.check();
  for (const std::string& st : m.states)
    if (std::find(setting.abstract_states.begin(), setting.abstract_states.end(), st) ==
        setting.abstract_states.end())
      throw ModelError("abstract model state '" + st + "' outside the setting");
  int target = m.require_state(s);

  EnumUniverse u;
  u.kind = ModelKind::KS;
  u.ap = m.ap;
  u.fixed_states = setting.concrete_states;
  u.max_states = static_cast<int>(setting.concrete_states.size());

  // rho restricted to C x states(m), as masks over the fixed state list.
  int n = static_cast<int>(setting.concrete_states.size());
  RelMasks rho(n, 0);
  StateSet points = 0;  // concrete states rho-related to s
  for (const auto& [c, a] : setting.rho) {
    auto ci = std::find(setting.concrete_states.begin(), setting.concrete_states.end(), c);
    if (ci == setting.concrete_states.end()) continue;
    int cidx = static_cast<int>(ci - setting.concrete_states.begin());
    if (auto ai = m.state_index(a)) {
      rho[cidx] |= 1ull << *ai;
      if (*ai == target) points |= 1ull << cidx;
    }
  }

  BoundedGamma gamma;
  gamma.universe = u;
  enumerate(u, [&](uint64_t idx, const Ks* k, const Gts*) {
    if ((k->init & points) == 0) return true;
    Gts e = embed_ks(*k);
    if (is_mixed_simulation_masks(e, m, rho)) gamma.members.push_back(idx);
    return true;
  });
  return gamma;
}

GammaComparison compare_gamma(const BoundedGamma& a, const BoundedGamma& b) {
  if (!(a.universe == b.universe))
    throw ModelError("gamma comparison across different universes");
  GammaComparison r;
  if (a.members == b.members) {
    r.equal = true;
    return r;
  }
  std::vector<uint64_t> diff;
  std::set_symmetric_difference(a.members.begin(), a.members.end(), b.members.begin(),
                                b.members.end(), std::back_inserter(diff));
  r.witness = diff.front();
  r.witness_in_first =
      std::binary_search(a.members.begin(), a.members.end(), diff.front());
  return r;
}

ThreeValued thorough_bounded(const Gts& m, const std::string& s, const Formula& f,
                             const EnumUniverse& u) {
  if (!f.closed()) throw EvalError("thorough check requires a closed formula");
  BoundedGamma gamma = gamma_bounded(m, s, u);
  if (gamma.members.empty()) return ThreeValued::Unknown;
  bool all = true, none = true;
  for (uint64_t idx : gamma.members) {
    Ks k = universe_ks(u, idx);
    bool sat = eval_ks(k, f) & 1;  // pointed at state 0
    all = all && sat;
    none = none && !sat;
  }
  if (all) return ThreeValued::True;
  if (none) return ThreeValued::False;
  return ThreeValued::Unknown;
}

std::optional<int> minmodel_bounded(const Formula& f, const Ks& k, int max_size) {
  if (!f.closed()) throw EvalError("minmodel requires a closed formula");
  k.check();
  StateSet sat = eval_ks(k, f);
  if ((k.init & ~sat) != 0)
    throw EvalError("the concrete model does not satisfy the formula");

  Gts concrete = embed_ks(k);
  SisEvaluator eval;
  for (int n = 1; n <= max_size; ++n) {
    EnumUniverse u;
    u.kind = ModelKind::GTS;
    u.max_states = n;
    u.ap = k.ap;
    u.pointed = false;
    bool found = false;
    Gts candidate;
    enumerate(u, [&](uint64_t, const Ks*, const Gts* g) {
      if (g->state_count() != n) return true;  // sizes below n already searched
      candidate = *g;
      StateSet all = n == 64 ? ~0ull : (1ull << n) - 1;
      eval.reset(candidate);
      StateSet tt = eval.tt(f);
      for (StateSet init = 1; init <= all; ++init) {
        if ((init & ~all) != 0) continue;
        if ((init & ~tt) != 0) continue;  // some initial state not proven
        candidate.init = init;
        if (leq_mix_model(concrete, candidate)) {
          found = true;
          return false;
        }
      }
      return true;
    });
    if (found) return n;
  }
  return std::nullopt;
}

SweepResult kmts_sweep(const Gts& against, const std::string& s, int size, int bound,
                       const std::vector<std::string>& ap) {
  EnumUniverse ks_universe{ModelKind::KS, bound, ap, true, {}};
  BoundedGamma target = gamma_bounded(against, s, ks_universe);

  // Pre-embed the concretisation universe once; candidates reuse it.
  std::vector<Gts> concretes;
  concretes.reserve(universe_size(ks_universe));
  enumerate(ks_universe, [&](uint64_t, const Ks* k, const Gts*) {
    concretes.push_back(embed_ks(*k));
    return true;
  });

  SweepResult result;
  result.target_gamma_size = target.members.size();
  EnumUniverse candidates{ModelKind::KMTS, size, ap, true, {}};
  enumerate(candidates, [&](uint64_t idx, const Ks*, const Gts* m) {
    std::vector<uint64_t> members;
    for (uint64_t i = 0; i < concretes.size(); ++i) {
      RelMasks rel = maximal_mixed_simulation_masks(concretes[i], *m);
      if (rel[0] & 1) members.push_back(i);  // point of the candidate is state 0
    }
    ++result.candidates;
    if (members == target.members) {
      if (!result.first_match) result.first_match = idx;
    } else {
      ++result.mismatches;
    }
    return true;
  });
  return result;
}

}  // namespace mucheck
