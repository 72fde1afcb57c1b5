#include "mucheck/refinement.hpp"

#include <algorithm>

namespace mucheck {

namespace {

// Label comparison across models with possibly different proposition lists:
// translate the right model's labels into the left model's index space.
// States whose labels mention a proposition the left model does not declare
// can never be contained in a left label.
struct LabelView {
  std::vector<LabelSet> translated;  // per right state
  std::vector<bool> foreign;         // per right state

  LabelView(const Gts& m1, const Gts& m2) {
    std::vector<int> apmap(m2.ap.size(), -1);
    for (size_t j = 0; j < m2.ap.size(); ++j)
      if (auto i = m1.ap_index(m2.ap[j])) apmap[j] = *i;
    translated.resize(m2.state_count());
    foreign.resize(m2.state_count(), false);
    for (int t = 0; t < m2.state_count(); ++t) {
      for (size_t j = 0; j < m2.ap.size(); ++j) {
        bool p = m2.labels[t].pos >> j & 1;
        bool n = m2.labels[t].neg >> j & 1;
        if (!p && !n) continue;
        if (apmap[j] < 0) {
          foreign[t] = true;
          break;
        }
        if (p) translated[t].pos |= 1u << apmap[j];
        if (n) translated[t].neg |= 1u << apmap[j];
      }
    }
  }

  bool contained(const Gts& m1, int s, int t) const {
    return !foreign[t] && m1.labels[s].contains(translated[t]);
  }
};

bool pair_ok(const Gts& m1, const Gts& m2, const RelMasks& rel, int s1, int s2) {
  // may forward
  for (int t1 = 0; t1 < m1.state_count(); ++t1) {
    if (!(m1.may[s1] >> t1 & 1)) continue;
    if ((rel[t1] & m2.may[s2]) == 0) return false;
  }
  // must backward
  for (StateSet a2 : m2.must[s2]) {
    bool matched = false;
    for (StateSet a1 : m1.must[s1]) {
      bool all = true;
      for (int t1 = 0; t1 < m1.state_count() && all; ++t1)
        if (a1 >> t1 & 1)
          if ((rel[t1] & a2) == 0) all = false;
      if (all) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace

RelMasks to_masks(const Gts& m1, const Gts& m2, const SimRelation& h) {
  RelMasks rel(m1.state_count(), 0);
  for (const auto& [a, b] : h.pairs)
    rel[m1.require_state(a)] |= 1ull << m2.require_state(b);
  return rel;
}

SimRelation to_relation(const Gts& m1, const Gts& m2, const RelMasks& rel) {
  SimRelation h;
  for (int s = 0; s < m1.state_count(); ++s)
    for (int t = 0; t < m2.state_count(); ++t)
      if (rel[s] >> t & 1) h.pairs.emplace_back(m1.states[s], m2.states[t]);
  return h;
}

RelMasks label_compatible_pairs(const Gts& m1, const Gts& m2) {
  LabelView lv(m1, m2);
  RelMasks rel(m1.state_count(), 0);
  for (int s1 = 0; s1 < m1.state_count(); ++s1)
    for (int s2 = 0; s2 < m2.state_count(); ++s2)
      if (lv.contained(m1, s1, s2)) rel[s1] |= 1ull << s2;
  return rel;
}

bool relation_clauses_hold(const Gts& m1, const Gts& m2, const RelMasks& rel) {
  for (int s1 = 0; s1 < m1.state_count(); ++s1)
    for (int s2 = 0; s2 < m2.state_count(); ++s2)
      if ((rel[s1] >> s2 & 1) && !pair_ok(m1, m2, rel, s1, s2)) return false;
  return true;
}

bool is_mixed_simulation_masks(const Gts& m1, const Gts& m2, const RelMasks& rel) {
  RelMasks lc = label_compatible_pairs(m1, m2);
  for (int s1 = 0; s1 < m1.state_count(); ++s1)
    if ((rel[s1] & ~lc[s1]) != 0) return false;
  return relation_clauses_hold(m1, m2, rel);
}

bool is_mixed_simulation(const Gts& m1, const Gts& m2, const SimRelation& h) {
  return is_mixed_simulation_masks(m1, m2, to_masks(m1, m2, h));
}

RelMasks maximal_mixed_simulation_masks(const Gts& m1, const Gts& m2) {
  int n1 = m1.state_count(), n2 = m2.state_count();
  RelMasks rel = label_compatible_pairs(m1, m2);

  // Predecessor indices: removing (t1, t2) can only invalidate pairs whose
  // may or must clauses inspect it.  Scratch is reused across calls; the
  // enumeration sweeps call this millions of times.
  thread_local std::vector<StateSet> may_pred1, may_pred2, must_src1, must_src2;
  may_pred1.assign(n1, 0);
  may_pred2.assign(n2, 0);
  must_src1.assign(n1, 0);
  must_src2.assign(n2, 0);
  for (int s = 0; s < n1; ++s) {
    for (int t = 0; t < n1; ++t)
      if (m1.may[s] >> t & 1) may_pred1[t] |= 1ull << s;
    for (StateSet a : m1.must[s])
      for (int t = 0; t < n1; ++t)
        if (a >> t & 1) must_src1[t] |= 1ull << s;
  }
  for (int s = 0; s < n2; ++s) {
    for (int t = 0; t < n2; ++t)
      if (m2.may[s] >> t & 1) may_pred2[t] |= 1ull << s;
    for (StateSet a : m2.must[s])
      for (int t = 0; t < n2; ++t)
        if (a >> t & 1) must_src2[t] |= 1ull << s;
  }

  thread_local std::vector<std::pair<int, int>> work;
  thread_local std::vector<StateSet> queued;
  work.clear();
  queued.assign(n1, 0);
  for (int s1 = 0; s1 < n1; ++s1)
    for (int s2 = 0; s2 < n2; ++s2)
      if (rel[s1] >> s2 & 1) {
        work.emplace_back(s1, s2);
        queued[s1] |= 1ull << s2;
      }

  auto enqueue = [&](StateSet left, StateSet right) {
    for (int u = 0; u < n1; ++u) {
      if (!(left >> u & 1)) continue;
      StateSet todo = right & rel[u] & ~queued[u];
      for (int v = 0; v < n2; ++v)
        if (todo >> v & 1) {
          work.emplace_back(u, v);
          queued[u] |= 1ull << v;
        }
    }
  };

  while (!work.empty()) {
    auto [s1, s2] = work.back();
    work.pop_back();
    queued[s1] &= ~(1ull << s2);
    if (!(rel[s1] >> s2 & 1)) continue;
    if (pair_ok(m1, m2, rel, s1, s2)) continue;
    rel[s1] &= ~(1ull << s2);
    enqueue(may_pred1[s1], may_pred2[s2]);
    enqueue(must_src1[s1], must_src2[s2]);
  }
  return rel;
}

SimRelation maximal_mixed_simulation(const Gts& m1, const Gts& m2) {
  return to_relation(m1, m2, maximal_mixed_simulation_masks(m1, m2));
}

bool leq_mix_state(const Gts& m1, const std::string& s1, const Gts& m2,
                   const std::string& s2) {
  int a = m1.require_state(s1);
  int b = m2.require_state(s2);
  RelMasks rel = maximal_mixed_simulation_masks(m1, m2);
  return rel[a] >> b & 1;
}

bool leq_mix_model(const Gts& m1, const Gts& m2) {
  RelMasks rel = maximal_mixed_simulation_masks(m1, m2);
  for (int s = 0; s < m1.state_count(); ++s) {
    if (!(m1.init >> s & 1)) continue;
    if ((rel[s] & m2.init) == 0) return false;
  }
  return true;
}

}  // namespace mucheck
