#include <catch2/catch_amalgamated.hpp>

#include "mucheck/approximant.hpp"
#include "mucheck/explorer.hpp"
#include "mucheck/repro.hpp"
#include "test_util.hpp"

using namespace mucheck;
using testutil::load_fixture_gts;
using testutil::load_fixture_ks;

namespace {

// Substitution-based expansion oracle for formulas with a single mu binder
// and no other binders: R(0) = body[X := false], R(k) = body[X := R(k-1)].
Formula expansion_oracle(const Formula& body, const VarName& x, int k) {
  Formula r = testutil::substitute(body, x, Formula::falsity());
  for (int i = 1; i <= k; ++i) r = testutil::substitute(body, x, r);
  return r;
}

}  // namespace

TEST_CASE("approx_var follows the definition table") {
  Formula psi = parse_formula("mu X. (p \\/ <>X)");
  CHECK(approx_var(psi, "X", 0, psi) == Formula::falsity());
  CHECK(approx_var(Formula::truth(), "X", 5, psi) == Formula::truth());
  Formula body = parse_formula("p \\/ <>X");
  CHECK(approx_var(body, "X", 1, psi) == parse_formula("p \\/ <>(p \\/ <>false)"));
}

TEST_CASE("approx_var re-indexes the binders and variables it passes") {
  Formula psi = parse_formula("mu X. (a \\/ <>(nu Z. (X /\\ []Z)))");
  Formula out = approx_var(psi, "X", 1, psi);
  // The copies of the inner nu binder carry the budget at their level.
  std::string printed = print_formula(out);
  CHECK(printed.find("Z_1") != std::string::npos);
  CHECK(printed.find("Z_0") != std::string::npos);
  FormulaInfo info = analyze(out);
  CHECK(info.well_formed);
  CHECK(info.free_vars.empty());
  CHECK(info.mu_vars.empty());
}

TEST_CASE("approx_var agrees with the substitution oracle on single binders") {
  for (const char* text : {"mu X. (p \\/ <>X)", "mu X. (p \\/ []X)", "mu X. <>X",
                           "mu X. (p \\/ <><>X)", "mu X. (p /\\ <>X \\/ !p)"}) {
    Formula psi = parse_formula(text);
    Formula body = psi.child();
    for (int k = 0; k <= 3; ++k) {
      Formula via_table = approx_var(body, "X", k, psi);
      CHECK(via_table == expansion_oracle(body, VarName("X"), k));
    }
  }
}

TEST_CASE("approx leaves mu-free formulas alone") {
  Formula inv = parse_formula("nu X. ([]X /\\ l)");
  CHECK(approx(inv, uniform_alpha(inv, 7)) == inv);
  Formula plain = parse_formula("[]a \\/ <>true");
  CHECK(approx(plain, {}) == plain);
}

TEST_CASE("approx at budget zero collapses the reachability formula") {
  Formula f = parse_formula("mu X. (p \\/ <>X)");
  Formula out = approx(f, uniform_alpha(f, 0));
  CHECK(analyze(out).mu_vars.empty());
  CHECK(out == Formula::falsity());
}

TEST_CASE("approx at budget two unfolds to diamond depth two over bottom") {
  Formula f = parse_formula("mu X. (p \\/ <>X)");
  Formula out = approx(f, uniform_alpha(f, 2));
  CHECK(out == parse_formula("p \\/ <>(p \\/ <>(p \\/ <>false))"));
  CHECK(analyze(out).mu_vars.empty());
}

TEST_CASE("uniform budgets cover exactly the mu variables") {
  Formula f = parse_formula("mu X. (p \\/ <>X)");
  ApproxBudget a = uniform_alpha(f, 2);
  CHECK(a == ApproxBudget{{"X", 2}});
  CHECK(uniform_alpha(parse_formula("nu X. ([]X /\\ l)"), 7).empty());
  Formula nested = parse_formula("mu X. <>(mu Y. (p \\/ <>Y) \\/ X)");
  CHECK(uniform_alpha(nested, 3) == ApproxBudget{{"X", 3}, {"Y", 3}});
}

TEST_CASE("nested mu elimination terminates and stays well-formed") {
  Formula nested = parse_formula("mu X. <>(mu Y. (p \\/ <>Y) \\/ X)");
  for (int k = 0; k <= 3; ++k) {
    Formula out = approx(nested, uniform_alpha(nested, k));
    FormulaInfo info = analyze(out);
    CHECK(info.well_formed);
    CHECK(info.mu_vars.empty());
    CHECK(info.free_vars.empty());
  }
}

TEST_CASE("approx_var keeps corpus formulas well-formed for small budgets") {
  for (const std::string& text : corpus_formulas()) {
    Formula f = parse_formula(text);
    for (const VarName& v : analyze(f).mu_vars)
      for (int k = 0; k <= 3; ++k) {
        Formula out = approx_var(f, v.base, k, f);
        CHECK(analyze(out).well_formed);
      }
  }
}

TEST_CASE("approximants of the corpus are mu-free and well-formed") {
  for (const std::string& text : corpus_formulas()) {
    Formula f = parse_formula(text);
    for (int k = 0; k <= 3; ++k) {
      Formula out = approx(f, uniform_alpha(f, k));
      FormulaInfo info = analyze(out);
      CHECK(info.well_formed);
      CHECK(info.mu_vars.empty());
      CHECK(info.free_vars.empty());
    }
  }
}

TEST_CASE("approximants under-approximate truth") {
  // Whatever the budget, the approximant's truth set is inside the
  // formula's on the same model.
  std::vector<Formula> mu_corpus;
  for (const std::string& text : corpus_formulas()) {
    Formula f = parse_formula(text);
    if (!analyze(f).mu_vars.empty()) mu_corpus.push_back(f);
  }
  SisEvaluator eval;
  EnumUniverse u{ModelKind::GTS, 2, {"a"}, true, {}};
  enumerate(u, [&](uint64_t, const Ks*, const Gts* g) {
    eval.reset(*g);
    for (const Formula& f : mu_corpus)
      for (int k = 0; k <= 2; ++k) {
        StateSet approx_tt = eval.tt(approx(f, uniform_alpha(f, k)));
        REQUIRE((approx_tt & ~eval.tt(f)) == 0);
      }
    return true;
  });
}

TEST_CASE("witness reports on the named models") {
  Formula reach = parse_formula("mu X. (p \\/ <>X)");
  WitnessReport chain = witness_check(embed_ks(load_fixture_ks("chain2.ks")), reach);
  CHECK(chain.lhs_true);
  CHECK(chain.rhs_true);
  CHECK(chain.agree);

  WitnessReport nofix = witness_check(load_fixture_gts("g.gts"), parse_formula("<>true"));
  CHECK(nofix.agree);
  CHECK(nofix.lhs_true);
  CHECK(nofix.approximant == parse_formula("<>true"));

  Gts dead = parse_model(
                 "model ks d { ap: p; states: d; init: d; label d: !p; }")
                 .as_gts();
  WitnessReport r = witness_check(dead, reach);
  CHECK_FALSE(r.lhs_true);
  CHECK_FALSE(r.rhs_true);
  CHECK(r.agree);
}

TEST_CASE("witness agreement across every 2-state GTS") {
  std::vector<Formula> mu_corpus;
  for (const std::string& text : corpus_formulas()) {
    Formula f = parse_formula(text);
    if (!analyze(f).mu_vars.empty()) mu_corpus.push_back(f);
  }
  EnumUniverse u{ModelKind::GTS, 2, {"a"}, true, {}};
  enumerate(u, [&](uint64_t, const Ks*, const Gts* g) {
    for (const Formula& f : mu_corpus) REQUIRE(witness_check(*g, f).agree);
    return true;
  });
}

TEST_CASE("budgets must cover every mu base") {
  Formula f = parse_formula("mu X. (p \\/ <>X)");
  CHECK_THROWS(approx(f, ApproxBudget{}));
  CHECK_THROWS(approx_var(f, "X", -1, f));
}
