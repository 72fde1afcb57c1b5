#include <catch2/catch_amalgamated.hpp>

#include "mucheck/explorer.hpp"
#include "mucheck/repro.hpp"
#include "mucheck/semantics.hpp"
#include "test_util.hpp"

using namespace mucheck;
using testutil::load_fixture_gts;
using testutil::load_fixture_ks;

TEST_CASE("two-valued evaluation on small structures") {
  Ks p1 = load_fixture_ks("p1.ks");
  CHECK(eval_ks(p1, parse_formula("nu X. ([]X /\\ a)")) == 1);
  CHECK(eval_ks(p1, parse_formula("true")) == 1);

  // Least fixpoint by hand on the 3-chain: iterate sat(p) | pre(next).
  Ks chain = load_fixture_ks("chain2.ks");
  Formula reach = parse_formula("mu X. (p \\/ <>X)");
  StateSet expected = 0;
  {
    StateSet base = 0b100;  // p holds at s2 only
    StateSet cur = 0;
    for (;;) {
      StateSet pre = 0;
      for (int s = 0; s < chain.state_count(); ++s)
        if (chain.trans[s] & cur) pre |= 1ull << s;
      StateSet next = base | pre;
      if (next == cur) break;
      cur = next;
    }
    expected = cur;
  }
  CHECK(expected == 0b111);
  CHECK(eval_ks(chain, reach) == expected);
}

TEST_CASE("three-valued evaluation on the gadget") {
  Gts g = load_fixture_gts("g.gts");
  SisResult some = eval_sis(g, parse_formula("<>true"));
  CHECK(some.tt == 0b01);  // s: the hyper guarantees a step
  CHECK(some.ff == 0b10);  // q has no may successor at all

  SisResult bot = eval_sis(g, parse_formula("false"));
  CHECK(bot.tt == 0);
  CHECK(bot.ff == 0b11);
}

TEST_CASE("the may-only model leaves the example formula unknown") {
  Gts pq = load_fixture_gts("pq.kmts");
  Formula f = parse_formula("[]p /\\ <>!q");
  SisResult r = eval_sis(pq, f);
  CHECK_FALSE(r.tt & 1);
  CHECK_FALSE(r.ff & 1);
  CHECK(verdict(pq, "t1", f) == ThreeValued::Unknown);
}

TEST_CASE("verdicts") {
  Gts g = load_fixture_gts("g.gts");
  CHECK(verdict(g, "s", parse_formula("<>true")) == ThreeValued::True);
  CHECK(verdict(g, "q", parse_formula("<>true")) == ThreeValued::False);
  CHECK_THROWS_AS(verdict(g, "s", parse_formula("p \\/ <>X")), EvalError);
  CHECK_THROWS_AS(verdict(g, "nope", parse_formula("true")), ModelError);
}

TEST_CASE("evaluation rejects unbound variables and foreign propositions") {
  Gts g = load_fixture_gts("g.gts");
  CHECK_THROWS_AS(eval_sis(g, parse_formula("<>X")), EvalError);
  CHECK_THROWS_AS(eval_sis(g, parse_formula("zz")), EvalError);
  Ks p1 = load_fixture_ks("p1.ks");
  CHECK_THROWS_AS(eval_ks(p1, parse_formula("X")), EvalError);

  // Bound through an environment the same formulas evaluate fine; the
  // gadget's hypertransition needs its whole target set inside the argument.
  Environment narrow, wide;
  narrow.bind(VarName("X"), 0b01);
  wide.bind(VarName("X"), 0b11);
  CHECK(eval_sis(g, parse_formula("<>X"), narrow, narrow).tt == 0);
  CHECK(eval_sis(g, parse_formula("<>X"), wide, wide).tt == 0b01);
  CHECK(eval_ks(p1, parse_formula("X"), narrow) == 1);
}

TEST_CASE("consistency and two-valuedness at small scale") {
  std::vector<Formula> corpus;
  for (const std::string& s : corpus_formulas()) corpus.push_back(parse_formula(s));

  // tt and ff never overlap on any 2-state GTS.
  EnumUniverse gts2{ModelKind::GTS, 2, {"a"}, true, {}};
  SisEvaluator eval;
  uint64_t models = 0;
  enumerate(gts2, [&](uint64_t, const Ks*, const Gts* g) {
    ++models;
    eval.reset(*g);
    for (const Formula& f : corpus) REQUIRE((eval.tt(f) & eval.ff(f)) == 0);
    return true;
  });
  CHECK(models == 1530);

  // On embedded Kripke structures the verdict is never unknown and the truth
  // set matches the independent two-valued evaluator.
  EnumUniverse ks2{ModelKind::KS, 2, {"a"}, true, {}};
  enumerate(ks2, [&](uint64_t, const Ks* k, const Gts*) {
    Gts g = embed_ks(*k);
    StateSet all = (1ull << k->state_count()) - 1;
    eval.reset(g);
    for (const Formula& f : corpus) {
      StateSet tt = eval.tt(f), ff = eval.ff(f);
      REQUIRE((tt | ff) == all);
      REQUIRE(tt == eval_ks(*k, f));
    }
    return true;
  });
}

TEST_CASE("fixpoint iteration is monotone and short") {
  std::mt19937_64 rng(7);
  std::vector<Formula> corpus;
  for (const std::string& s : corpus_formulas()) corpus.push_back(parse_formula(s));
  for (int i = 0; i < 40; ++i) {
    Gts g = testutil::random_gts(rng, 3);
    size_t n = static_cast<size_t>(g.state_count());
    for (const Formula& f : corpus) {
      std::vector<FixpointTrace> trace;
      EvalOptions opts;
      opts.trace = &trace;
      eval_sis(g, f, {}, {}, opts);
      for (const FixpointTrace& t : trace) {
        REQUIRE(t.iterates.size() >= 2);
        // Ascending for least fixpoints, descending for greatest; at most
        // one strict change per state.
        size_t changes = 0;
        for (size_t j = 1; j < t.iterates.size(); ++j) {
          StateSet prev = t.iterates[j - 1], cur = t.iterates[j];
          if (t.least)
            REQUIRE((prev & ~cur) == 0);
          else
            REQUIRE((cur & ~prev) == 0);
          if (prev != cur) ++changes;
        }
        REQUIRE(changes <= n);
      }
    }
  }
}

TEST_CASE("truth of a formula is falsity of its dual") {
  std::mt19937_64 rng(8);
  std::vector<Formula> corpus;
  for (const std::string& s : corpus_formulas()) corpus.push_back(parse_formula(s));
  SisEvaluator eval;
  for (int i = 0; i < 60; ++i) {
    Gts g = testutil::random_gts(rng, 3);
    eval.reset(g);
    for (const Formula& f : corpus) {
      Formula d = testutil::dual(f);
      REQUIRE(eval.tt(f) == eval.ff(d));
      REQUIRE(eval.ff(f) == eval.tt(d));
    }
  }
}

TEST_CASE("separate truth and falsity environments") {
  // The two columns thread their own environment: binding X differently for
  // truth and falsity shows up independently in the two results.
  Gts g = load_fixture_gts("g.gts");
  Environment tt_env, ff_env;
  tt_env.bind(VarName("X"), 0b01);
  ff_env.bind(VarName("X"), 0b10);
  SisResult r = eval_sis(g, parse_formula("X"), tt_env, ff_env);
  CHECK(r.tt == 0b01);
  CHECK(r.ff == 0b10);
}

TEST_CASE("evaluation agrees with a fresh evaluator after reuse") {
  // The memoisation in SisEvaluator is keyed per model; switching models
  // must not leak cached sets.
  Gts g = load_fixture_gts("g.gts");
  Gts pq = load_fixture_gts("pq.kmts");
  Formula f = parse_formula("<>true");
  SisEvaluator reused;
  reused.reset(g);
  StateSet first = reused.tt(f);
  reused.reset(pq);
  StateSet second = reused.tt(f);
  CHECK(first == eval_sis(g, f).tt);
  CHECK(second == eval_sis(pq, f).tt);
}
