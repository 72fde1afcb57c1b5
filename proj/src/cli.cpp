#include "mucheck/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "mucheck/abstraction.hpp"
#include "mucheck/approximant.hpp"
#include "mucheck/explorer.hpp"
#include "mucheck/models.hpp"
#include "mucheck/refinement.hpp"
#include "mucheck/repro.hpp"
#include "mucheck/semantics.hpp"

namespace mucheck::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParsedModel load_model(const std::string& path) { return parse_model(read_file(path)); }

Gts load_gts(const std::string& path) { return load_model(path).as_gts(); }

Ks load_ks(const std::string& path) {
  ParsedModel m = load_model(path);
  if (!m.ks) throw ModelError(path + ": expected a `model ks` file");
  return *m.ks;
}

// "file.gts:state"
std::pair<Gts, std::string> load_pointed(const std::string& spec) {
  size_t colon = spec.rfind(':');
  if (colon == std::string::npos || colon + 1 >= spec.size())
    throw ModelError("expected FILE:STATE, got '" + spec + "'");
  Gts g = load_gts(spec.substr(0, colon));
  std::string state = spec.substr(colon + 1);
  g.require_state(state);
  return {std::move(g), std::move(state)};
}

std::string state_set_names(const Gts& g, StateSet set) {
  std::string out = "{";
  bool first = true;
  for (int s = 0; s < g.state_count(); ++s)
    if (set >> s & 1) {
      out += (first ? "" : ", ") + g.states[s];
      first = false;
    }
  return out + "}";
}

std::string compact_ks(const Ks& k) {
  std::ostringstream out;
  out << "states=" << k.state_count();
  for (int s = 0; s < k.state_count(); ++s) {
    out << " " << k.states[s];
    if (k.init >> s & 1) out << "*";
    out << "[";
    bool first = true;
    for (size_t j = 0; j < k.ap.size(); ++j) {
      out << (first ? "" : ",") << (k.labels[s].pos >> j & 1 ? "" : "!") << k.ap[j];
      first = false;
    }
    out << "]->{";
    first = true;
    for (int t = 0; t < k.state_count(); ++t)
      if (k.trans[s] >> t & 1) {
        out << (first ? "" : ",") << k.states[t];
        first = false;
      }
    out << "}";
  }
  return out.str();
}

int verdict_exit(ThreeValued v) { return v == ThreeValued::True ? 0 : 1; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct Args {
  std::string model, concrete, abstract_, formula, batch, state, pair, prop;
  std::string setting, alpha, against, a_spec, b_spec, only, fixtures = "fixtures";
  std::string ap;
  std::vector<std::string> formulas;  // `check` accepts several
  int bound = 2, size = 2, max_size = 2, k = -1;
  bool sets = false, figure_faithful = false, dot = false, list = false;
  bool maximal = false;
};

int run_check(const Args& a, std::ostream& out) {
  Gts g = load_gts(a.model);
  std::vector<std::string> formulas = a.formulas;
  if (!a.batch.empty()) {
    std::istringstream in(read_file(a.batch));
    std::string line;
    while (std::getline(in, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos) formulas.push_back(line);
  }
  if (formulas.empty()) throw std::invalid_argument("no formula given");
  int exit = 0;
  for (const std::string& text : formulas) {
    Formula f = parse_formula(text);
    ThreeValued v = verdict(g, a.state, f);
    out << to_string(v) << "\n";
    if (a.sets) {
      SisResult r = eval_sis(g, f);
      out << "tt: " << state_set_names(g, r.tt) << "\n";
      out << "ff: " << state_set_names(g, r.ff) << "\n";
    }
    exit = std::max(exit, verdict_exit(v));
  }
  return exit;
}

int run_sets(const Args& a, std::ostream& out) {
  Gts g = load_gts(a.model);
  Formula f = parse_formula(a.formula);
  SisResult r = eval_sis(g, f);
  StateSet all = g.state_count() == 64 ? ~0ull : (1ull << g.state_count()) - 1;
  out << "tt: " << state_set_names(g, r.tt) << "\n";
  out << "ff: " << state_set_names(g, r.ff) << "\n";
  out << "unknown: " << state_set_names(g, all & ~(r.tt | r.ff)) << "\n";
  return 0;
}

int run_mixedsim(const Args& a, std::ostream& out) {
  Gts m1 = load_gts(a.concrete);
  Gts m2 = load_gts(a.abstract_);
  if (a.maximal) {
    SimRelation h = maximal_mixed_simulation(m1, m2);
    for (const auto& [x, y] : h.pairs) out << x << " -> " << y << "\n";
    return 0;
  }
  if (!a.pair.empty()) {
    size_t colon = a.pair.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--pair expects CONCRETE:ABSTRACT");
    bool ok = leq_mix_state(m1, a.pair.substr(0, colon), m2, a.pair.substr(colon + 1));
    out << (ok ? "true" : "false") << "\n";
    return ok ? 0 : 1;
  }
  bool ok = leq_mix_model(m1, m2);
  out << (ok ? "true" : "false") << "\n";
  return ok ? 0 : 1;
}

int run_gtok(const Args& a, std::ostream& out, std::ostream& err) {
  Gts g = load_gts(a.model);
  auto [result, map] = gtok(g, a.figure_faithful ? GtokMode::FigureFaithful
                                                 : GtokMode::KeepMay);
  out << (a.dot ? to_dot(result) : serialize(result));
  for (const auto& [members, fresh] : map.entries) {
    err << "new state " << fresh << " <- {";
    for (size_t i = 0; i < members.size(); ++i) err << (i ? ", " : "") << members[i];
    err << "}\n";
  }
  if (!a.setting.empty()) {
    AbstractionSetting s = parse_setting(read_file(a.setting));
    out << serialize(extend_rho(s, map, g));
  }
  return 0;
}

int run_steps(const Args& a, std::ostream& out) {
  Ks k = load_ks(a.model);
  Gts g = steps_abstraction(k, a.prop);
  out << (a.dot ? to_dot(g) : serialize(g));
  return 0;
}

int run_approx(const Args& a, std::ostream& out) {
  Formula f = parse_formula(a.formula);
  ApproxBudget alpha;
  if (a.k >= 0 && !a.alpha.empty())
    throw std::invalid_argument("give either --k or --alpha, not both");
  if (a.k >= 0) {
    alpha = uniform_alpha(f, a.k);
  } else if (!a.alpha.empty()) {
    for (const std::string& item : split_list(a.alpha)) {
      size_t eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--alpha expects NAME=BUDGET,...");
      alpha[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    }
  } else {
    throw std::invalid_argument("give --k or --alpha");
  }
  out << print_formula(approx(f, alpha)) << "\n";
  return 0;
}

int run_witness(const Args& a, std::ostream& out) {
  Gts g = load_gts(a.model);
  Formula f = parse_formula(a.formula);
  WitnessReport r = witness_check(g, f);
  out << "lhs: " << (r.lhs_true ? "true" : "not-true") << "\n";
  out << "rhs: " << (r.rhs_true ? "true" : "not-true") << "\n";
  out << "agree: " << (r.agree ? "yes" : "no") << "\n";
  out << "approximant: " << print_formula(r.approximant) << "\n";
  return r.agree ? 0 : 1;
}

EnumUniverse make_universe(const Gts& m, const Args& a) {
  EnumUniverse u;
  u.kind = ModelKind::KS;
  u.max_states = a.bound;
  u.ap = a.ap.empty() ? m.ap : split_list(a.ap);
  u.pointed = true;
  return u;
}

int run_gamma(const Args& a, std::ostream& out) {
  Gts m = load_gts(a.model);
  EnumUniverse u = make_universe(m, a);
  BoundedGamma gamma = gamma_bounded(m, a.state, u);
  out << "universe: " << universe_size(u) << " pointed KSs (bound " << u.max_states
      << ")\n";
  out << "members: " << gamma.members.size() << "\n";
  if (a.list)
    for (uint64_t idx : gamma.members)
      out << idx << ": " << compact_ks(universe_ks(u, idx)) << "\n";
  return 0;
}

int run_gamma_compare(const Args& a, std::ostream& out) {
  auto [ma, sa] = load_pointed(a.a_spec);
  auto [mb, sb] = load_pointed(a.b_spec);
  EnumUniverse u = make_universe(ma, a);
  if (a.ap.empty() && ma.ap != mb.ap)
    throw std::invalid_argument("models declare different propositions; give --ap");
  BoundedGamma ga = gamma_bounded(ma, sa, u);
  BoundedGamma gb = gamma_bounded(mb, sb, u);
  GammaComparison cmp = compare_gamma(ga, gb);
  if (cmp.equal) {
    out << "equal (" << ga.members.size() << " members, bound " << u.max_states << ")\n";
    return 0;
  }
  out << "unequal: witness " << *cmp.witness << " in "
      << (cmp.witness_in_first ? "a" : "b") << " only: "
      << compact_ks(universe_ks(u, *cmp.witness)) << "\n";
  return 1;
}

int run_thorough(const Args& a, std::ostream& out) {
  Gts m = load_gts(a.model);
  Formula f = parse_formula(a.formula);
  EnumUniverse u = make_universe(m, a);
  ThreeValued v = thorough_bounded(m, a.state, f, u);
  out << to_string(v) << " (bound " << u.max_states << ")\n";
  return verdict_exit(v);
}

int run_minmodel(const Args& a, std::ostream& out, std::ostream& err) {
  Formula f = parse_formula(a.formula);
  Ks k = load_ks(a.concrete);
  if (a.max_size > 3) throw std::invalid_argument("--max-size is capped at 3");
  if (a.max_size == 3)
    err << "note: searching all 3-state GTSs; this can take minutes\n";
  std::optional<int> n = minmodel_bounded(f, k, a.max_size);
  if (n) {
    out << "minmodel: " << *n << "\n";
    return 0;
  }
  out << "none within " << a.max_size << " states\n";
  return 1;
}

int run_kmts_sweep(const Args& a, std::ostream& out) {
  auto [g, s] = load_pointed(a.against);
  std::vector<std::string> ap = a.ap.empty() ? g.ap : split_list(a.ap);
  SweepResult r = kmts_sweep(g, s, a.size, a.bound, ap);
  out << "candidates: " << r.candidates << " pointed KMTSs (size <= " << a.size
      << ")\n";
  out << "target gamma: " << r.target_gamma_size << " members (bound " << a.bound
      << ")\n";
  out << "mismatches: " << r.mismatches << " ("
      << (r.candidates ? 100.0 * r.mismatches / r.candidates : 0.0) << "%)\n";
  if (r.first_match) {
    out << "match: candidate " << *r.first_match << " has the same bounded gamma\n";
    return 1;
  }
  out << "match: none\n";
  return 0;
}

int run_repro(const Args& a, std::ostream& out) {
  ReproOptions opts;
  opts.fixtures_dir = a.fixtures;
  opts.only = a.only;
  std::vector<ReproCheck> checks = paper_repro(opts);
  bool all = true;
  for (const ReproCheck& c : checks) {
    out << (c.pass ? "PASS" : "FAIL") << " " << c.name;
    if (!c.expected.empty()) out << " | expected: " << c.expected;
    out << " | observed: " << c.observed << "\n";
    all = all && c.pass;
  }
  out << (all ? "all checks passed" : "CHECKS FAILED") << " (" << checks.size()
      << " run)\n";
  return all ? 0 : 1;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"three-valued mu-calculus model checking over KS/KMTS/GTS models"};
  app.require_subcommand(1);
  Args a;

  CLI::App* check = app.add_subcommand("check", "evaluate formulas at a state");
  check->add_option("--model", a.model)->required();
  check->add_option("--state", a.state)->required();
  check->add_option("--formula", a.formulas, "formula to check (repeatable)");
  check->add_option("--batch", a.batch, "file with one formula per line");
  check->add_flag("--sets", a.sets, "also print the truth/falsity sets");

  CLI::App* sets = app.add_subcommand("sets", "print truth/falsity/unknown sets");
  sets->add_option("--model", a.model)->required();
  sets->add_option("--formula", a.formula)->required();

  CLI::App* mixedsim = app.add_subcommand("mixedsim", "mixed simulation queries");
  mixedsim->add_option("--concrete", a.concrete)->required();
  mixedsim->add_option("--abstract", a.abstract_)->required();
  mixedsim->add_flag("--maximal", a.maximal, "print the maximal mixed simulation");
  mixedsim->add_option("--pair", a.pair, "check one CONCRETE:ABSTRACT state pair");

  CLI::App* gtok_cmd = app.add_subcommand("gtok", "split must hypertransitions off");
  gtok_cmd->add_option("--model", a.model)->required();
  gtok_cmd->add_flag("--figure-faithful", a.figure_faithful,
                     "drop the source's may edges into each split target");
  gtok_cmd->add_option("--setting", a.setting, "also extend this setting's rho");
  gtok_cmd->add_flag("--dot", a.dot, "emit graphviz instead of model text");

  CLI::App* steps = app.add_subcommand("steps-abstract", "collapse by distance to a prop");
  steps->add_option("--model", a.model)->required();
  steps->add_option("--prop", a.prop)->required();
  steps->add_flag("--dot", a.dot);

  CLI::App* approx_cmd = app.add_subcommand("approx", "least-fixpoint-free approximant");
  approx_cmd->add_option("--formula", a.formula)->required();
  approx_cmd->add_option("--k", a.k, "uniform unfolding budget");
  approx_cmd->add_option("--alpha", a.alpha, "per-variable budgets NAME=K,...");

  CLI::App* witness = app.add_subcommand("witness", "approximant witness report");
  witness->add_option("--model", a.model)->required();
  witness->add_option("--formula", a.formula)->required();

  CLI::App* gamma = app.add_subcommand("gamma", "bounded concretisation set");
  gamma->add_option("--model", a.model)->required();
  gamma->add_option("--state", a.state)->required();
  gamma->add_option("--bound", a.bound)->required();
  gamma->add_option("--ap", a.ap, "universe propositions (default: the model's)");
  gamma->add_flag("--list", a.list, "list the member structures");

  CLI::App* gcmp = app.add_subcommand("gamma-compare", "compare two bounded gammas");
  gcmp->add_option("--a", a.a_spec, "FILE:STATE")->required();
  gcmp->add_option("--b", a.b_spec, "FILE:STATE")->required();
  gcmp->add_option("--bound", a.bound)->required();
  gcmp->add_option("--ap", a.ap);

  CLI::App* thorough = app.add_subcommand("thorough", "bounded thorough verdict");
  thorough->add_option("--model", a.model)->required();
  thorough->add_option("--state", a.state)->required();
  thorough->add_option("--formula", a.formula)->required();
  thorough->add_option("--bound", a.bound)->required();
  thorough->add_option("--ap", a.ap);

  CLI::App* minmodel = app.add_subcommand("minmodel", "least proving abstraction size");
  minmodel->add_option("--formula", a.formula)->required();
  minmodel->add_option("--concrete", a.concrete)->required();
  minmodel->add_option("--max-size", a.max_size, "search bound (default 2, max 3)");

  CLI::App* sweep = app.add_subcommand("kmts-sweep", "compare every small KMTS's gamma");
  sweep->add_option("--against", a.against, "FILE:STATE")->required();
  sweep->add_option("--size", a.size)->required();
  sweep->add_option("--bound", a.bound)->required();
  sweep->add_option("--ap", a.ap);

  CLI::App* repro = app.add_subcommand("paper-repro", "run the bundled check suite");
  repro->add_option("--only", a.only, "run a single named check");
  repro->add_option("--fixtures", a.fixtures, "fixtures directory");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*check) return run_check(a, out);
    if (*sets) return run_sets(a, out);
    if (*mixedsim) return run_mixedsim(a, out);
    if (*gtok_cmd) return run_gtok(a, out, err);
    if (*steps) return run_steps(a, out);
    if (*approx_cmd) return run_approx(a, out);
    if (*witness) return run_witness(a, out);
    if (*gamma) return run_gamma(a, out);
    if (*gcmp) return run_gamma_compare(a, out);
    if (*thorough) return run_thorough(a, out);
    if (*minmodel) return run_minmodel(a, out, err);
    if (*sweep) return run_kmts_sweep(a, out);
    if (*repro) return run_repro(a, out);
  } catch (const ParseError& e) {
    err << "parse error at " << e.line << ":" << e.col << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace mucheck::cli
