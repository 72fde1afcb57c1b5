#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "mucheck/abstraction.hpp"
#include "mucheck/explorer.hpp"
#include "mucheck/refinement.hpp"
#include "mucheck/repro.hpp"
#include "mucheck/semantics.hpp"
#include "test_util.hpp"

using namespace mucheck;
using testutil::load_fixture_gts;
using testutil::load_fixture_ks;

namespace {

// Independent per-pair clause check, used to cross-validate the library's
// worklist computation with a naive delete-until-stable loop.
bool pair_clauses(const Gts& m1, const Gts& m2, const RelMasks& rel, int s1, int s2) {
  for (int t1 = 0; t1 < m1.state_count(); ++t1)
    if ((m1.may[s1] >> t1 & 1) && (rel[t1] & m2.may[s2]) == 0) return false;
  for (StateSet a2 : m2.must[s2]) {
    bool matched = false;
    for (StateSet a1 : m1.must[s1]) {
      bool all = true;
      for (int t1 = 0; t1 < m1.state_count(); ++t1)
        if ((a1 >> t1 & 1) && (rel[t1] & a2) == 0) all = false;
      if (all) matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

RelMasks naive_maximal(const Gts& m1, const Gts& m2, unsigned order_seed) {
  RelMasks rel = label_compatible_pairs(m1, m2);
  std::vector<std::pair<int, int>> order;
  for (int s1 = 0; s1 < m1.state_count(); ++s1)
    for (int s2 = 0; s2 < m2.state_count(); ++s2) order.emplace_back(s1, s2);
  std::mt19937_64 rng(order_seed);
  std::shuffle(order.begin(), order.end(), rng);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [s1, s2] : order) {
      if (!(rel[s1] >> s2 & 1)) continue;
      if (!pair_clauses(m1, m2, rel, s1, s2)) {
        rel[s1] &= ~(1ull << s2);
        changed = true;
      }
    }
  }
  return rel;
}

}  // namespace

TEST_CASE("membership checks on the named relations") {
  Gts k2 = load_fixture_gts("k2.ks");
  Gts m_all = load_fixture_gts("m_all.kmts");
  SimRelation diag{{{"q1", "s1"}, {"q2", "s2"}}};
  CHECK(is_mixed_simulation(k2, m_all, diag));
  CHECK(is_mixed_simulation(k2, m_all, SimRelation{}));  // vacuous

  Gts p1 = load_fixture_gts("p1.ks");
  Gts g = load_fixture_gts("g.gts");
  SimRelation wrong{{{"p1", "q"}}};  // label containment fails
  CHECK_FALSE(is_mixed_simulation(p1, g, wrong));
  SimRelation right{{{"p1", "s"}}};
  CHECK(is_mixed_simulation(p1, g, right));
}

TEST_CASE("the maximal simulation on the label-free pair is the full square") {
  Gts k2 = load_fixture_gts("k2.ks");
  Gts m_all = load_fixture_gts("m_all.kmts");
  RelMasks rel = maximal_mixed_simulation_masks(k2, m_all);
  CHECK(rel[0] == 0b11);
  CHECK(rel[1] == 0b11);
  SimRelation named = maximal_mixed_simulation(k2, m_all);
  CHECK(named.pairs.size() == 4);
}

TEST_CASE("maximal simulation contains the expected pairs") {
  Gts p1 = load_fixture_gts("p1.ks");
  RelMasks self = maximal_mixed_simulation_masks(p1, embed_ks(load_fixture_ks("p1.ks")));
  CHECK((self[0] & 1) == 1);

  Gts chain = load_fixture_gts("p2p3.ks");
  Gts g = load_fixture_gts("g.gts");
  RelMasks rel = maximal_mixed_simulation_masks(chain, g);
  CHECK((rel[0] & 0b01) != 0);  // p2 related to s
  CHECK((rel[1] & 0b10) != 0);  // p3 related to q
}

TEST_CASE("state-level ordering on the gadget") {
  Gts g = load_fixture_gts("g.gts");
  CHECK(leq_mix_state(load_fixture_gts("p1.ks"), "p1", g, "s"));
  CHECK(leq_mix_state(load_fixture_gts("p2p3.ks"), "p2", g, "s"));
  CHECK_FALSE(leq_mix_state(load_fixture_gts("dead_a.ks"), "d", g, "s"));
  CHECK_FALSE(leq_mix_state(load_fixture_gts("dead_na.ks"), "d", g, "s"));
  CHECK(leq_mix_state(g, "s", g, "s"));  // reflexive on the same model
  CHECK_THROWS_AS(leq_mix_state(g, "zz", g, "s"), ModelError);
}

TEST_CASE("model-level ordering") {
  Gts g = load_fixture_gts("g.gts");
  CHECK(leq_mix_model(load_fixture_gts("p2p3.ks"), g));
  CHECK(leq_mix_model(g, g));
  Ks chain = load_fixture_ks("chain2.ks");
  CHECK(leq_mix_model(embed_ks(chain), steps_abstraction(chain, "p")));
  CHECK_FALSE(leq_mix_model(load_fixture_gts("dead_a.ks"), g));
}

TEST_CASE("the maximal relation is a simulation and contains every simulation") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    Gts a = testutil::random_gts(rng, 2);
    Gts b = testutil::random_gts(rng, 2);
    RelMasks maximal = maximal_mixed_simulation_masks(a, b);
    CHECK(is_mixed_simulation_masks(a, b, maximal));
    int n1 = a.state_count(), n2 = b.state_count();
    RelMasks h(n1, 0);
    for (uint32_t bits = 0; bits < (1u << (n1 * n2)); ++bits) {
      for (int s = 0; s < n1; ++s) h[s] = (bits >> (s * n2)) & ((1u << n2) - 1);
      if (!is_mixed_simulation_masks(a, b, h)) continue;
      for (int s = 0; s < n1; ++s) REQUIRE((h[s] & ~maximal[s]) == 0);
    }
  }
}

TEST_CASE("the worklist agrees with naive deletion in any order") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 80; ++i) {
    Gts a = testutil::random_gts(rng, 3);
    Gts b = testutil::random_gts(rng, 3);
    RelMasks expected = maximal_mixed_simulation_masks(a, b);
    for (unsigned seed = 0; seed < 4; ++seed)
      REQUIRE(naive_maximal(a, b, seed) == expected);
  }
}

TEST_CASE("weak preservation across mixed simulation at small scale") {
  // Abstract truth carries to every related concrete state, abstract falsity
  // likewise; sampled across random pairs and the whole corpus.
  std::mt19937_64 rng(13);
  std::vector<Formula> corpus;
  for (const std::string& s : corpus_formulas()) corpus.push_back(parse_formula(s));
  SisEvaluator eval;
  for (int i = 0; i < 50; ++i) {
    Ks k = testutil::random_ks(rng, 3);
    Gts abs = testutil::random_gts(rng, 2);
    Gts conc = embed_ks(k);
    RelMasks rel = maximal_mixed_simulation_masks(conc, abs);
    eval.reset(abs);
    for (const Formula& f : corpus) {
      StateSet att = eval.tt(f), aff = eval.ff(f);
      StateSet sat = eval_ks(k, f);
      for (int x = 0; x < conc.state_count(); ++x)
        for (int y = 0; y < abs.state_count(); ++y) {
          if (!(rel[x] >> y & 1)) continue;
          if (att >> y & 1) REQUIRE((sat >> x & 1) == 1);
          if (aff >> y & 1) REQUIRE((sat >> x & 1) == 0);
        }
    }
  }
}

TEST_CASE("simulation across differing proposition lists") {
  // The abstract model may use propositions the concrete side never
  // declares; such labels can never be contained.
  Gts a = parse_model("model gts a { ap:; states: s; init: s; }").as_gts();
  Gts b = parse_model("model gts b { ap: z; states: t; init: t; label t: z; }").as_gts();
  RelMasks rel = maximal_mixed_simulation_masks(a, b);
  CHECK(rel[0] == 0);
  Gts c = parse_model("model gts c { ap: z; states: t; init: t; }").as_gts();
  CHECK(maximal_mixed_simulation_masks(a, c)[0] == 1);
}
