#include "mucheck/abstraction.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>

#include "mucheck/refinement.hpp"

namespace mucheck {

std::optional<std::string> StateMap::fresh_name(
    const std::vector<std::string>& members) const {
  for (const auto& [m, n] : entries)
    if (m == members) return n;
  return std::nullopt;
}

std::pair<Gts, StateMap> gtok(const Gts& g, GtokMode mode) {
  g.check();
  int n = g.state_count();

  // Fresh states, one per distinct proper hyper target set, in first-use order.
  std::vector<StateSet> hyper_sets;
  for (int s = 0; s < n; ++s)
    for (StateSet a : g.must[s])
      if (__builtin_popcountll(a) >= 2 &&
          std::find(hyper_sets.begin(), hyper_sets.end(), a) == hyper_sets.end())
        hyper_sets.push_back(a);

  Gts out;
  out.name = g.name;
  out.states = g.states;
  out.ap = g.ap;
  out.init = g.init;
  out.labels = g.labels;
  out.may = g.may;
  out.must.resize(n);

  std::set<std::string> used(g.states.begin(), g.states.end());
  StateMap map;
  std::map<StateSet, int> fresh_index;
  for (StateSet a : hyper_sets) {
    std::vector<std::string> members;
    std::string name;
    for (int t = 0; t < n; ++t)
      if (a >> t & 1) {
        members.push_back(g.states[t]);
        name += g.states[t];
      }
    while (used.count(name)) name += '_';
    used.insert(name);
    fresh_index[a] = out.state_count();
    out.states.push_back(name);
    map.entries.emplace_back(std::move(members), name);
    // The fresh state promises only what all members agree on.
    LabelSet l{~0u, ~0u};
    for (int t = 0; t < n; ++t)
      if (a >> t & 1) {
        l.pos &= g.labels[t].pos;
        l.neg &= g.labels[t].neg;
      }
    out.labels.push_back(l);
    out.may.push_back(0);
  }
  out.must.resize(out.state_count());

  for (int s = 0; s < n; ++s) {
    // Singleton musts survive the split; their may edges are never dropped,
    // or consistency would be lost.
    StateSet kept_singletons = 0;
    for (StateSet a : g.must[s])
      if (__builtin_popcountll(a) == 1) kept_singletons |= a;
    for (StateSet a : g.must[s]) {
      if (__builtin_popcountll(a) < 2) {
        out.must[s].push_back(a);
        continue;
      }
      int pa = fresh_index.at(a);
      out.must[s].push_back(1ull << pa);
      out.may[s] |= 1ull << pa;
      if (mode == GtokMode::FigureFaithful) out.may[s] &= ~(a & ~kept_singletons);
    }
  }

  // May edges out of each fresh state: wherever some member could go, with
  // members' own replaced hypers pointing at their fresh states.
  for (const auto& [a, pa] : fresh_index) {
    StateSet succ = 0;
    for (int t = 0; t < n; ++t)
      if (a >> t & 1) {
        succ |= g.may[t];
        for (StateSet b : g.must[t])
          if (__builtin_popcountll(b) >= 2) succ |= 1ull << fresh_index.at(b);
      }
    out.may[pa] = succ;
  }

  for (auto& v : out.must) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  out.check();
  return {std::move(out), std::move(map)};
}

AbstractionSetting extend_rho(const AbstractionSetting& setting, const StateMap& map,
                              const Gts& source) {
  AbstractionSetting out = setting;
  for (const auto& [members, fresh] : map.entries) {
    for (const std::string& m : members)
      if (!source.state_index(m))
        throw ModelError("state map mentions unknown source state '" + m + "'");
    if (std::find(out.abstract_states.begin(), out.abstract_states.end(), fresh) ==
        out.abstract_states.end())
      out.abstract_states.push_back(fresh);
    for (const auto& [c, s] : setting.rho)
      if (std::find(members.begin(), members.end(), s) != members.end()) {
        auto pair = std::make_pair(c, fresh);
        if (std::find(out.rho.begin(), out.rho.end(), pair) == out.rho.end())
          out.rho.push_back(std::move(pair));
      }
  }
  return out;
}

Gts steps_abstraction(const Ks& k, const std::string& prop) {
  k.check();
  int n = k.state_count();
  int j = -1;
  for (size_t i = 0; i < k.ap.size(); ++i)
    if (k.ap[i] == prop) j = static_cast<int>(i);
  if (j < 0) throw ModelError("model does not declare proposition '" + prop + "'");

  constexpr int kInf = 1 << 20;
  std::vector<int> steps(n, kInf);
  std::deque<int> queue;
  for (int s = 0; s < n; ++s)
    if (k.labels[s].pos >> j & 1) {
      steps[s] = 0;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    int t = queue.front();
    queue.pop_front();
    for (int s = 0; s < n; ++s)
      if ((k.trans[s] >> t & 1) && steps[s] > steps[t] + 1) {
        steps[s] = steps[t] + 1;
        queue.push_back(s);
      }
  }

  int max_init = 0;
  for (int s = 0; s < n; ++s)
    if (k.init >> s & 1) {
      if (steps[s] >= kInf)
        throw ModelError("initial state '" + k.states[s] + "' cannot reach a '" +
                         prop + "'-state");
      max_init = std::max(max_init, steps[s]);
    }

  // Classes 0..max_init; everything farther (or unreachable) collapses into
  // one overflow class, present only when needed.
  bool overflow = false;
  for (int s = 0; s < n; ++s)
    if (steps[s] > max_init) overflow = true;
  int classes = max_init + 1 + (overflow ? 1 : 0);
  int rest = max_init + 1;
  auto class_of = [&](int s) { return steps[s] > max_init ? rest : steps[s]; };

  Gts out;
  out.name = k.name + "_steps";
  out.ap = k.ap;
  for (int c = 0; c <= max_init; ++c) out.states.push_back("c" + std::to_string(c));
  if (overflow) out.states.push_back("rest");
  out.labels.assign(classes, LabelSet{~0u, ~0u});
  out.may.assign(classes, 0);
  out.must.resize(classes);

  for (int s = 0; s < n; ++s) {
    int c = class_of(s);
    out.labels[c].pos &= k.labels[s].pos;
    out.labels[c].neg &= k.labels[s].neg;
    if (k.init >> s & 1) out.init |= 1ull << c;
    for (int t = 0; t < n; ++t)
      if (k.trans[s] >> t & 1) out.may[c] |= 1ull << class_of(t);
  }
  for (int c = 1; c <= max_init; ++c) out.must[c].push_back(1ull << (c - 1));
  if (overflow) out.may[rest] |= 1ull << rest;  // it must never prove progress

  out.check();
  return out;
}

AbstractionSetting make_setting(std::vector<std::string> concrete,
                                std::vector<std::pair<std::string, std::string>> rho,
                                std::vector<std::string> abstract,
                                const Ks* witness, const Gts* abstract_model) {
  AbstractionSetting s;
  s.concrete_states = std::move(concrete);
  s.abstract_states = std::move(abstract);
  s.rho = std::move(rho);
  auto member = [](const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  for (const auto& [c, a] : s.rho) {
    if (!member(s.concrete_states, c))
      throw ModelError("rho mentions '" + c + "' outside the concrete set");
    if (!member(s.abstract_states, a))
      throw ModelError("rho mentions '" + a + "' outside the abstract set");
  }
  if (witness) {
    for (const std::string& st : witness->states)
      if (!member(s.concrete_states, st))
        throw ModelError("witness state '" + st + "' outside the concrete set");
  }
  if (abstract_model) {
    for (const std::string& st : abstract_model->states)
      if (!member(s.abstract_states, st))
        throw ModelError("abstract state '" + st + "' outside the abstract set");
  }
  if (witness && abstract_model) {
    Gts c = embed_ks(*witness);
    SimRelation h;
    for (const auto& [x, y] : s.rho)
      if (c.state_index(x) && abstract_model->state_index(y)) h.pairs.emplace_back(x, y);
    if (!is_mixed_simulation(c, *abstract_model, h))
      throw ModelError("rho is not a mixed simulation for the supplied witness");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Setting files:
//
//   setting rho_g {
//     concrete: s_C, q_C;
//     abstract: s, q;
//     rho: s_C -> s, q_C -> q;
//   }

namespace {

struct SettingTokens {
  explicit SettingTokens(const std::string& text) {
    size_t pos = 0;
    int line = 1, col = 1;
    auto bump = [&] {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    };
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        std::string w;
        int l = line, co = col;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
          w += text[pos];
          bump();
        }
        toks.push_back({w, l, co});
      } else if (c == '-' && pos + 1 < text.size() && text[pos + 1] == '>') {
        toks.push_back({"->", line, col});
        bump();
        bump();
      } else if (std::string("{}:;,").find(c) != std::string::npos) {
        toks.push_back({std::string(1, c), line, col});
        bump();
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
    toks.push_back({"", line, col});
  }
  struct T {
    std::string w;
    int line, col;
  };
  std::vector<T> toks;
};

}  // namespace

AbstractionSetting parse_setting(const std::string& text) {
  SettingTokens tz(text);
  size_t i = 0;
  auto peek = [&]() -> const SettingTokens::T& { return tz.toks[i]; };
  auto take = [&]() -> const SettingTokens::T& { return tz.toks[i++]; };
  auto expect = [&](const std::string& w) {
    if (peek().w != w) throw ParseError("expected '" + w + "'", peek().line, peek().col);
    ++i;
  };
  auto ident = [&]() -> std::string {
    const auto& t = take();
    if (t.w.empty() || !(std::isalpha(static_cast<unsigned char>(t.w[0])) || t.w[0] == '_'))
      throw ParseError("expected an identifier", t.line, t.col);
    return t.w;
  };
  auto name_list = [&]() {
    std::vector<std::string> out;
    if (peek().w == ";") {
      ++i;
      return out;
    }
    out.push_back(ident());
    while (peek().w == ",") {
      ++i;
      out.push_back(ident());
    }
    expect(";");
    return out;
  };

  expect("setting");
  AbstractionSetting s;
  s.name = ident();
  expect("{");
  while (peek().w != "}") {
    std::string key = ident();
    expect(":");
    if (key == "concrete") {
      s.concrete_states = name_list();
    } else if (key == "abstract") {
      s.abstract_states = name_list();
    } else if (key == "rho") {
      if (peek().w == ";") {
        ++i;
        continue;
      }
      for (;;) {
        std::string c = ident();
        expect("->");
        s.rho.emplace_back(c, ident());
        if (peek().w == ",") {
          ++i;
          continue;
        }
        break;
      }
      expect(";");
    } else {
      throw ParseError("unknown setting clause '" + key + "'", peek().line, peek().col);
    }
  }
  expect("}");
  AbstractionSetting checked = make_setting(s.concrete_states, s.rho, s.abstract_states);
  checked.name = s.name;
  return checked;
}

std::string serialize(const AbstractionSetting& s) {
  std::ostringstream out;
  out << "setting " << s.name << " {\n  concrete:";
  for (size_t i = 0; i < s.concrete_states.size(); ++i)
    out << (i ? ", " : " ") << s.concrete_states[i];
  out << ";\n  abstract:";
  for (size_t i = 0; i < s.abstract_states.size(); ++i)
    out << (i ? ", " : " ") << s.abstract_states[i];
  out << ";\n  rho:";
  for (size_t i = 0; i < s.rho.size(); ++i)
    out << (i ? ", " : " ") << s.rho[i].first << " -> " << s.rho[i].second;
  out << ";\n}\n";
  return out.str();
}

}  // namespace mucheck
