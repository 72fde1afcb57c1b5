#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mucheck/cli.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using mucheck::testutil::fixtures_dir;

namespace {

struct RunResult {
  int exit;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = mucheck::cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return fixtures_dir() + "/" + name; }

}  // namespace

TEST_CASE("check prints a verdict and signals it in the exit code") {
  RunResult t = run({"check", "--model", fx("g.gts"), "--state", "s", "--formula",
                     "<>true"});
  CHECK(t.exit == 0);
  CHECK(t.out == "true\n");

  RunResult f = run({"check", "--model", fx("g.gts"), "--state", "q", "--formula",
                     "<>true"});
  CHECK(f.exit == 1);
  CHECK(f.out == "false\n");

  RunResult u = run({"check", "--model", fx("pq.kmts"), "--state", "t1", "--formula",
                     "[]p /\\ <>!q", "--sets"});
  CHECK(u.exit == 1);
  CHECK(u.out.find("unknown") == 0);
  CHECK(u.out.find("tt: {") != std::string::npos);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run({"check", "--model", "missing.gts", "--state", "s", "--formula", "true"})
            .exit == 2);
  CHECK(run({"frobnicate"}).exit == 2);
  CHECK(run({}).exit == 2);
  CHECK(run({"check", "--model", fx("g.gts"), "--state", "s"}).exit == 2);
  RunResult bad = run({"check", "--model", fx("g.gts"), "--state", "s", "--formula",
                       "mu X. ("});
  CHECK(bad.exit == 2);
  CHECK(bad.err.find("parse error") != std::string::npos);
  CHECK(run({"check", "--model", fx("g.gts"), "--state", "zz", "--formula", "true"})
            .exit == 2);
}

TEST_CASE("batched formulas evaluate line by line") {
  fs::path batch = fs::temp_directory_path() / "mucheck_batch.txt";
  {
    std::ofstream out(batch);
    out << "<>true\n\na\n";
  }
  RunResult r = run({"check", "--model", fx("g.gts"), "--state", "s", "--batch",
                     batch.string()});
  CHECK(r.exit == 0);
  CHECK(r.out == "true\ntrue\n");
  fs::remove(batch);
}

TEST_CASE("sets shows the three regions") {
  RunResult r = run({"sets", "--model", fx("g.gts"), "--formula", "<>true"});
  CHECK(r.exit == 0);
  CHECK(r.out.find("tt: {s}") != std::string::npos);
  CHECK(r.out.find("ff: {q}") != std::string::npos);
  CHECK(r.out.find("unknown: {}") != std::string::npos);
}

TEST_CASE("mixedsim answers model, pair and maximal queries") {
  RunResult model = run({"mixedsim", "--concrete", fx("p2p3.ks"), "--abstract",
                         fx("g.gts")});
  CHECK(model.exit == 0);
  CHECK(model.out == "true\n");

  RunResult pair = run({"mixedsim", "--concrete", fx("dead_a.ks"), "--abstract",
                        fx("g.gts"), "--pair", "d:s"});
  CHECK(pair.exit == 1);
  CHECK(pair.out == "false\n");

  RunResult maximal = run({"mixedsim", "--concrete", fx("k2.ks"), "--abstract",
                           fx("m_all.kmts"), "--maximal"});
  CHECK(maximal.exit == 0);
  CHECK(maximal.out ==
        "q1 -> s1\nq1 -> s2\nq2 -> s1\nq2 -> s2\n");
}

TEST_CASE("gtok prints the split model, mapping and extended setting") {
  RunResult r = run({"gtok", "--model", fx("g.gts"), "--figure-faithful", "--setting",
                     fx("g.setting")});
  CHECK(r.exit == 0);
  CHECK(r.out.find("model kmts") != std::string::npos);
  CHECK(r.out.find("must s -> {sq};") != std::string::npos);
  CHECK(r.out.find("s_C -> sq") != std::string::npos);
  CHECK(r.err.find("new state sq <- {s, q}") != std::string::npos);

  RunResult dot = run({"gtok", "--model", fx("g.gts"), "--dot"});
  CHECK(dot.out.find("digraph") == 0);
}

TEST_CASE("steps-abstract emits the collapsed model") {
  RunResult r = run({"steps-abstract", "--model", fx("chain2.ks"), "--prop", "p"});
  CHECK(r.exit == 0);
  CHECK(r.out.find("states: c0, c1, c2") != std::string::npos);
  CHECK(r.out.find("must c2 -> {c1};") != std::string::npos);
  CHECK(run({"steps-abstract", "--model", fx("g.gts"), "--prop", "a"}).exit == 2);
}

TEST_CASE("approx takes uniform or per-variable budgets") {
  RunResult k = run({"approx", "--formula", "mu X. (p \\/ <>X)", "--k", "2"});
  CHECK(k.exit == 0);
  CHECK(k.out == "p \\/ <>(p \\/ <>(p \\/ <>false))\n");
  RunResult alpha = run({"approx", "--formula", "mu X. (p \\/ <>X)", "--alpha", "X=0"});
  CHECK(alpha.out == "false\n");
  CHECK(run({"approx", "--formula", "true"}).exit == 2);
  CHECK(run({"approx", "--formula", "true", "--k", "1", "--alpha", "X=1"}).exit == 2);
}

TEST_CASE("witness reports both sides") {
  RunResult r = run({"witness", "--model", fx("chain2.ks"), "--formula",
                     "mu X. (p \\/ <>X)"});
  CHECK(r.exit == 0);
  CHECK(r.out.find("lhs: true") != std::string::npos);
  CHECK(r.out.find("rhs: true") != std::string::npos);
  CHECK(r.out.find("agree: yes") != std::string::npos);
}

TEST_CASE("gamma lists members and gamma-compare finds witnesses") {
  RunResult g = run({"gamma", "--model", fx("g.gts"), "--state", "s", "--bound", "2",
                     "--list"});
  CHECK(g.exit == 0);
  CHECK(g.out.find("members: 17") != std::string::npos);
  CHECK(g.out.find("universe: 68") != std::string::npos);

  RunResult eq = run({"gamma-compare", "--a", fx("g.gts") + ":s", "--b",
                      fx("g.gts") + ":s", "--bound", "2"});
  CHECK(eq.exit == 0);
  CHECK(eq.out.find("equal") == 0);

  RunResult ne = run({"gamma-compare", "--a", fx("g.gts") + ":s", "--b",
                      fx("p1.ks") + ":p1", "--bound", "2"});
  CHECK(ne.exit == 1);
  CHECK(ne.out.find("unequal") == 0);
}

TEST_CASE("thorough and minmodel report bounded results") {
  RunResult t = run({"thorough", "--model", fx("pq.kmts"), "--state", "t1",
                     "--formula", "[]p /\\ <>!q", "--bound", "2"});
  CHECK(t.exit == 1);
  CHECK(t.out == "false (bound 2)\n");

  RunResult m = run({"minmodel", "--formula", "mu X. (p \\/ <>X)", "--concrete",
                     fx("chain0.ks"), "--max-size", "2"});
  CHECK(m.exit == 0);
  CHECK(m.out == "minmodel: 1\n");
  CHECK(run({"minmodel", "--formula", "mu X. (p \\/ <>X)", "--concrete",
             fx("chain0.ks"), "--max-size", "4"})
            .exit == 2);
}

TEST_CASE("kmts-sweep reports the separation") {
  RunResult r = run({"kmts-sweep", "--against", fx("g.gts") + ":s", "--size", "2",
                     "--bound", "2", "--ap", "a"});
  CHECK(r.exit == 0);
  CHECK(r.out.find("mismatches: 738 (100%)") != std::string::npos);
  CHECK(r.out.find("match: none") != std::string::npos);
}

TEST_CASE("paper-repro runs a single named check") {
  RunResult r = run({"paper-repro", "--only", "gtok-contextual", "--fixtures",
                     fixtures_dir()});
  CHECK(r.exit == 0);
  CHECK(r.out.find("PASS gtok-contextual") == 0);
  CHECK(run({"paper-repro", "--only", "bogus", "--fixtures", fixtures_dir()}).exit == 2);
}

TEST_CASE("a mutated gadget fixture fails the dependent checks") {
  fs::path dir = fs::temp_directory_path() / "mucheck_mutated_fixtures";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(fixtures_dir()))
    fs::copy_file(entry.path(), dir / entry.path().filename());
  {
    // Drop the hypertransition from the gadget.
    std::ifstream in(dir / "g.gts");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    size_t pos = text.find("must s -> {s, q};");
    REQUIRE(pos != std::string::npos);
    text.erase(pos, std::string("must s -> {s, q};").size());
    std::ofstream out(dir / "g.gts");
    out << text;
  }
  RunResult sweep = run({"paper-repro", "--only", "kmts-separation", "--fixtures",
                         dir.string()});
  CHECK(sweep.exit == 1);
  CHECK(sweep.out.find("FAIL kmts-separation") == 0);
  RunResult split = run({"paper-repro", "--only", "gtok-contextual", "--fixtures",
                         dir.string()});
  CHECK(split.exit == 1);
  CHECK(split.out.find("FAIL gtok-contextual") == 0);
  fs::remove_all(dir);
}

TEST_CASE("help is available") {
  RunResult r = run({"--help"});
  CHECK(r.exit == 0);
  CHECK(r.out.find("check") != std::string::npos);
  CHECK(r.out.find("paper-repro") != std::string::npos);
}
