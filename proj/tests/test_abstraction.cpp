#include <catch2/catch_amalgamated.hpp>

#include "mucheck/abstraction.hpp"
#include "mucheck/refinement.hpp"
#include "mucheck/semantics.hpp"
#include "test_util.hpp"

using namespace mucheck;
using testutil::load_fixture_gts;
using testutil::load_fixture_ks;
using testutil::read_fixture;

TEST_CASE("splitting the gadget's hypertransition matches the bundled model") {
  Gts g = load_fixture_gts("g.gts");
  auto [split, map] = gtok(g, GtokMode::FigureFaithful);
  CHECK(validate(split) == ModelKind::KMTS);
  CHECK(same_model(split, load_fixture_gts("gtok_g_figure.kmts")));
  REQUIRE(map.entries.size() == 1);
  CHECK(map.entries[0].first == std::vector<std::string>{"s", "q"});
  CHECK(map.entries[0].second == "sq");
  CHECK(split.init == g.init);

  // keep-may retains the source's original edges on top of the same split.
  auto [keep, map2] = gtok(g, GtokMode::KeepMay);
  CHECK(validate(keep) == ModelKind::KMTS);
  int s = keep.require_state("s");
  int q = keep.require_state("q");
  int sq = keep.require_state("sq");
  CHECK((keep.may[s] >> s & 1) == 1);
  CHECK((keep.may[s] >> q & 1) == 1);
  CHECK((keep.may[s] >> sq & 1) == 1);
  CHECK(keep.may[sq] == split.may[split.require_state("sq")]);
  CHECK(keep.labels[sq].pos == 0);
  CHECK(keep.labels[sq].neg == 0);  // {a} and {!a} agree on nothing
}

TEST_CASE("splitting is the identity on models without proper hypers") {
  Gts kmts = load_fixture_gts("gtok_g_figure.kmts");
  auto [out, map] = gtok(kmts, GtokMode::FigureFaithful);
  CHECK(map.entries.empty());
  CHECK(out == kmts);
  auto [out2, map2] = gtok(kmts, GtokMode::KeepMay);
  CHECK(out2 == kmts);
}

TEST_CASE("split states share one fresh state per distinct target set") {
  Gts m = parse_model(
              "model gts m { ap: a; states: u, v, w; init: u;"
              " label u: a; label v: a; label w: a;"
              " may u -> v; may u -> w; may v -> v; may v -> w;"
              " must u -> {v, w}; must v -> {v, w}; }")
              .as_gts();
  auto [out, map] = gtok(m, GtokMode::KeepMay);
  REQUIRE(map.entries.size() == 1);
  std::string fresh = map.entries[0].second;
  CHECK(fresh == "vw");
  int f = out.require_state(fresh);
  CHECK(out.labels[f].pos == 1);  // both members carry a
  // Both hyper sources now must-step into the shared fresh state.
  CHECK(out.must[out.require_state("u")] ==
        std::vector<StateSet>{1ull << f});
  CHECK(out.must[out.require_state("v")] ==
        std::vector<StateSet>{1ull << f});
}

TEST_CASE("fresh names avoid existing states") {
  Gts m = parse_model(
              "model gts m { ap:; states: s, q, sq; init: s;"
              " may s -> s; may s -> q; must s -> {s, q}; }")
              .as_gts();
  auto [out, map] = gtok(m, GtokMode::KeepMay);
  REQUIRE(map.entries.size() == 1);
  CHECK(map.entries[0].second == "sq_");
  CHECK(out.state_count() == 4);
}

TEST_CASE("fresh-state labels never clash") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    Gts g = testutil::random_gts(rng, 3);
    auto [out, map] = gtok(g, i % 2 ? GtokMode::KeepMay : GtokMode::FigureFaithful);
    CHECK(validate(out) != ModelKind::GTS);  // no proper hypers remain
    for (int s = 0; s < out.state_count(); ++s)
      CHECK((out.labels[s].pos & out.labels[s].neg) == 0);
  }
}

TEST_CASE("rho extension follows the state map") {
  AbstractionSetting setting = parse_setting(read_fixture("g.setting"));
  Gts g = load_fixture_gts("g.gts");
  auto [split, map] = gtok(g, GtokMode::FigureFaithful);
  AbstractionSetting ext = extend_rho(setting, map, g);
  REQUIRE(ext.rho.size() == 4);
  using P = std::pair<std::string, std::string>;
  CHECK(std::find(ext.rho.begin(), ext.rho.end(), P{"s_C", "sq"}) != ext.rho.end());
  CHECK(std::find(ext.rho.begin(), ext.rho.end(), P{"q_C", "sq"}) != ext.rho.end());
  CHECK(std::find(ext.abstract_states.begin(), ext.abstract_states.end(), "sq") !=
        ext.abstract_states.end());

  AbstractionSetting unchanged = extend_rho(setting, StateMap{}, g);
  CHECK(unchanged.rho == setting.rho);

  AbstractionSetting empty = make_setting({"c"}, {}, {"s", "q"});
  AbstractionSetting ext_empty = extend_rho(empty, map, g);
  CHECK(ext_empty.rho.empty());
}

TEST_CASE("steps collapse of the 3-chain") {
  Ks chain = load_fixture_ks("chain2.ks");
  Gts a = steps_abstraction(chain, "p");
  CHECK(a.state_count() == 3);
  CHECK(a.states == std::vector<std::string>{"c0", "c1", "c2"});
  // Collapsing a deterministic chain loses nothing, so this one even
  // classifies as a Kripke structure; it must never be a proper GTS.
  CHECK(validate(a) != ModelKind::GTS);
  int c0 = a.require_state("c0"), c1 = a.require_state("c1"), c2 = a.require_state("c2");
  CHECK(a.must[c2] == std::vector<StateSet>{1ull << c1});
  CHECK(a.must[c1] == std::vector<StateSet>{1ull << c0});
  CHECK(a.must[c0].empty());
  CHECK(a.init == 1ull << c2);
  CHECK((a.labels[c0].pos & 1) == 1);  // the 0-class keeps p
  CHECK(leq_mix_model(embed_ks(chain), a));
  CHECK(verdict(a, "c2", parse_formula("mu X. (p \\/ <>X)")) == ThreeValued::True);
}

TEST_CASE("steps collapse of an immediate hit") {
  Ks single = load_fixture_ks("chain0.ks");
  Gts a = steps_abstraction(single, "p");
  CHECK(a.state_count() == 1);
  CHECK(verdict(a, "c0", parse_formula("mu X. (p \\/ <>X)")) == ThreeValued::True);
}

TEST_CASE("steps collapse rejects unreachable initial states") {
  Ks k = parse_model(
             "model ks k { ap: p; states: s0, s1; init: s0;"
             " label s0: !p; label s1: p; }")
             .ks.value();
  CHECK_THROWS_AS(steps_abstraction(k, "p"), ModelError);
  CHECK_THROWS_AS(steps_abstraction(k, "zz"), ModelError);
}

TEST_CASE("far states collapse into a mustless overflow class") {
  // s0 -> s1(p); s2 and s3 sit beyond the worst initial distance.
  Ks k = parse_model(
             "model ks k { ap: p; states: s0, s1, s2, s3; init: s0;"
             " label s0: !p; label s1: p; label s2: !p; label s3: !p;"
             " may s0 -> s1; may s2 -> s3; may s3 -> s2; may s1 -> s2; }")
             .ks.value();
  Gts a = steps_abstraction(k, "p");
  CHECK(a.state_count() <= 1 + 2);  // max initial distance 1, plus overflow
  int rest = a.require_state("rest");
  CHECK(a.must[rest].empty());
  CHECK((a.may[rest] >> rest & 1) == 1);
  CHECK(leq_mix_model(embed_ks(k), a));
}

TEST_CASE("settings validate their relation against a witness") {
  AbstractionSetting s = parse_setting(read_fixture("g.setting"));
  CHECK(s.concrete_states == std::vector<std::string>{"s_C", "q_C"});
  CHECK(s.rho.size() == 2);

  Gts g = load_fixture_gts("g.gts");
  Ks witness = parse_model(
                   "model ks w { ap: a; states: s_C; init: s_C;"
                   " label s_C: a; may s_C -> s_C; }")
                   .ks.value();
  CHECK_NOTHROW(make_setting(s.concrete_states, s.rho, s.abstract_states, &witness, &g));

  // A deadlocked witness cannot honour the gadget's must hypertransition.
  Ks dead = parse_model(
                "model ks w { ap: a; states: s_C; init: s_C; label s_C: a; }")
                .ks.value();
  CHECK_THROWS_AS(make_setting(s.concrete_states, s.rho, s.abstract_states, &dead, &g),
                  ModelError);

  // Structural-only validation without a witness.
  CHECK_NOTHROW(make_setting({"c"}, {}, {"x"}));
  CHECK_THROWS_AS(make_setting({"c"}, {{"c", "y"}}, {"x"}), ModelError);

  // The label-free running pair validates with its diagonal relation.
  Ks k2 = load_fixture_ks("k2.ks");
  Gts m_all = load_fixture_gts("m_all.kmts");
  CHECK_NOTHROW(make_setting({"q1", "q2"}, {{"q1", "s1"}, {"q2", "s2"}}, {"s1", "s2"},
                             &k2, &m_all));
}

TEST_CASE("setting files round-trip") {
  AbstractionSetting s = parse_setting(read_fixture("g.setting"));
  AbstractionSetting back = parse_setting(serialize(s));
  CHECK(back.concrete_states == s.concrete_states);
  CHECK(back.abstract_states == s.abstract_states);
  CHECK(back.rho == s.rho);
}
