#include "mucheck/models.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace mucheck {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::KS: return "ks";
    case ModelKind::KMTS: return "kmts";
    case ModelKind::GTS: return "gts";
  }
  return "?";
}

namespace {

std::optional<int> find_name(const std::vector<std::string>& v, const std::string& s) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] == s) return static_cast<int>(i);
  return std::nullopt;
}

}  // namespace

std::optional<int> Gts::state_index(const std::string& n) const { return find_name(states, n); }
std::optional<int> Ks::state_index(const std::string& n) const { return find_name(states, n); }
std::optional<int> Gts::ap_index(const std::string& p) const { return find_name(ap, p); }

int Gts::require_state(const std::string& n) const {
  if (auto i = state_index(n)) return *i;
  throw ModelError("model '" + name + "' has no state '" + n + "'");
}

int Ks::require_state(const std::string& n) const {
  if (auto i = state_index(n)) return *i;
  throw ModelError("model '" + name + "' has no state '" + n + "'");
}

std::vector<Literal> Gts::label_literals(int s) const {
  std::vector<Literal> out;
  for (size_t j = 0; j < ap.size(); ++j) {
    if (labels[s].pos >> j & 1) out.push_back(Literal{ap[j], false});
    if (labels[s].neg >> j & 1) out.push_back(Literal{ap[j], true});
  }
  return out;
}

void Gts::check() const {
  int n = state_count();
  if (n == 0) throw ModelError("model '" + name + "' has no states");
  if (n > 64) throw ModelError("model '" + name + "' exceeds the 64-state limit");
  {
    std::set<std::string> uniq(states.begin(), states.end());
    if (static_cast<int>(uniq.size()) != n)
      throw ModelError("model '" + name + "' has duplicate state names");
  }
  StateSet all = n == 64 ? ~0ull : (1ull << n) - 1;
  if ((init & ~all) != 0) throw ModelError("initial states outside the state set");
  if (static_cast<int>(labels.size()) != n || static_cast<int>(may.size()) != n ||
      static_cast<int>(must.size()) != n)
    throw ModelError("model '" + name + "' has inconsistent component sizes");
  uint32_t apmask = ap.size() >= 32 ? ~0u : (1u << ap.size()) - 1;
  for (int s = 0; s < n; ++s) {
    if ((may[s] & ~all) != 0) throw ModelError("may edge leaves the state set");
    if ((labels[s].pos & labels[s].neg) != 0)
      throw ModelError("state '" + states[s] + "' is labelled with both a proposition and its negation");
    if ((labels[s].pos & ~apmask) || (labels[s].neg & ~apmask))
      throw ModelError("state '" + states[s] + "' uses an undeclared proposition");
    for (StateSet a : must[s]) {
      if (a == 0) throw ModelError("must transition with empty target set");
      if ((a & ~may[s]) != 0)
        throw ModelError("must transition from '" + states[s] +
                         "' lacks a matching may transition");
    }
  }
}

void Ks::check() const {
  int n = state_count();
  if (n == 0) throw ModelError("model '" + name + "' has no states");
  if (n > 64) throw ModelError("model '" + name + "' exceeds the 64-state limit");
  {
    std::set<std::string> uniq(states.begin(), states.end());
    if (static_cast<int>(uniq.size()) != n)
      throw ModelError("model '" + name + "' has duplicate state names");
  }
  StateSet all = n == 64 ? ~0ull : (1ull << n) - 1;
  if ((init & ~all) != 0) throw ModelError("initial states outside the state set");
  if (static_cast<int>(labels.size()) != n || static_cast<int>(trans.size()) != n)
    throw ModelError("model '" + name + "' has inconsistent component sizes");
  uint32_t apmask = ap.size() >= 32 ? ~0u : (1u << ap.size()) - 1;
  for (int s = 0; s < n; ++s) {
    if ((trans[s] & ~all) != 0) throw ModelError("transition leaves the state set");
    if ((labels[s].pos & labels[s].neg) != 0)
      throw ModelError("state '" + states[s] + "' is labelled with both a proposition and its negation");
    if ((labels[s].pos | labels[s].neg) != apmask)
      throw ModelError("state '" + states[s] +
                       "' lacks a total labelling (required for a Kripke structure)");
  }
}

namespace {

std::vector<StateSet> normalize_must(std::vector<StateSet> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

bool Gts::operator==(const Gts& other) const {
  if (states != other.states || ap != other.ap || init != other.init ||
      labels != other.labels || may != other.may)
    return false;
  if (must.size() != other.must.size()) return false;
  for (size_t s = 0; s < must.size(); ++s)
    if (normalize_must(must[s]) != normalize_must(other.must[s])) return false;
  return true;
}

bool Ks::operator==(const Ks& other) const {
  return states == other.states && ap == other.ap && init == other.init &&
         labels == other.labels && trans == other.trans;
}

ModelKind validate(const Gts& m) {
  m.check();
  bool kmts = true;
  for (int s = 0; s < m.state_count(); ++s)
    for (StateSet a : m.must[s])
      if (__builtin_popcountll(a) != 1) kmts = false;
  if (!kmts) return ModelKind::GTS;

  uint32_t apmask = m.ap.size() >= 32 ? ~0u : (1u << m.ap.size()) - 1;
  for (int s = 0; s < m.state_count(); ++s) {
    if ((m.labels[s].pos | m.labels[s].neg) != apmask) return ModelKind::KMTS;
    StateSet singles = 0;
    for (StateSet a : m.must[s]) singles |= a;
    if (singles != m.may[s] ||
        m.must[s].size() != static_cast<size_t>(__builtin_popcountll(m.may[s])))
      return ModelKind::KMTS;
  }
  return ModelKind::KS;
}

Gts embed_ks(const Ks& k) {
  k.check();
  Gts g;
  g.name = k.name;
  g.states = k.states;
  g.ap = k.ap;
  g.init = k.init;
  g.labels = k.labels;
  g.may = k.trans;
  g.must.resize(k.state_count());
  for (int s = 0; s < k.state_count(); ++s)
    for (int t = 0; t < k.state_count(); ++t)
      if (k.trans[s] >> t & 1) g.must[s].push_back(1ull << t);
  return g;
}

int model_size(const Gts& m) { return m.state_count(); }
int model_size(const Ks& k) { return k.state_count(); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ModelLexer {
 public:
  explicit ModelLexer(const std::string& text) : text_(text) {}

  struct Tok {
    std::string word;  // identifier or punctuation; empty at end
    int line, col;
  };

  Tok next() {
    skip_ws();
    Tok t{"", line_, col_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        bump();
      t.word = text_.substr(start, pos_ - start);
      return t;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      bump();
      bump();
      t.word = "->";
      return t;
    }
    if (std::string("{}:;,!").find(c) != std::string::npos) {
      bump();
      t.word = std::string(1, c);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class ModelParser {
 public:
  explicit ModelParser(const std::string& text) : lex_(text) { advance(); }

  ParsedModel parse() {
    expect_word("model");
    std::string kind_word = take_ident("model kind (ks, kmts or gts)");
    ModelKind kind;
    if (kind_word == "ks") kind = ModelKind::KS;
    else if (kind_word == "kmts") kind = ModelKind::KMTS;
    else if (kind_word == "gts") kind = ModelKind::GTS;
    else fail("unknown model kind '" + kind_word + "'");
    std::string name = take_ident("model name");
    expect_word("{");
    while (tok_.word != "}") parse_clause(kind);
    advance();  // '}'

    return build(kind, name);
  }

 private:
  struct RawMust {
    std::string src;
    std::vector<std::string> targets;
    int line, col;
  };

  void parse_clause(ModelKind kind) {
    ModelLexer::Tok head = tok_;
    std::string key = take_ident("clause keyword");
    if (key == "ap") {
      expect_word(":");
      ap_ = take_name_list();
    } else if (key == "states") {
      expect_word(":");
      states_ = take_name_list();
    } else if (key == "init") {
      expect_word(":");
      init_ = take_name_list();
    } else if (key == "label") {
      std::string state = take_ident("state name");
      expect_word(":");
      labels_.emplace_back(state, take_literal_list());
    } else if (key == "may") {
      std::string src = take_ident("state name");
      expect_word("->");
      std::string dst = take_ident("state name");
      expect_word(";");
      may_.emplace_back(src, dst);
    } else if (key == "must") {
      if (kind == ModelKind::KS)
        throw ParseError("a ks lists transitions as may edges only", head.line, head.col);
      RawMust m;
      m.src = take_ident("state name");
      m.line = head.line;
      m.col = head.col;
      expect_word("->");
      if (tok_.word == "{") {
        advance();
        m.targets.push_back(take_ident("state name"));
        while (tok_.word == ",") {
          advance();
          m.targets.push_back(take_ident("state name"));
        }
        expect_word("}");
      } else {
        m.targets.push_back(take_ident("state name"));
      }
      expect_word(";");
      musts_.push_back(std::move(m));
    } else {
      throw ParseError("unknown clause '" + key + "'", head.line, head.col);
    }
  }

  ParsedModel build(ModelKind kind, const std::string& name) {
    if (states_.empty()) throw ModelError("model '" + name + "' declares no states");

    Gts g;
    g.name = name;
    g.states = states_;
    g.ap = ap_;
    g.labels.resize(states_.size());
    g.may.resize(states_.size());
    g.must.resize(states_.size());
    for (const std::string& s : init_) g.init |= 1ull << require(g, s);
    for (const auto& [state, lits] : labels_) {
      int s = require(g, state);
      for (const Literal& l : lits) {
        auto j = g.ap_index(l.name);
        if (!j) throw ModelError("label uses undeclared proposition '" + l.name + "'");
        if (l.negated) g.labels[s].neg |= 1u << *j;
        else g.labels[s].pos |= 1u << *j;
      }
    }
    for (const auto& [src, dst] : may_) g.may[require(g, src)] |= 1ull << require(g, dst);
    for (const RawMust& m : musts_) {
      StateSet a = 0;
      for (const std::string& t : m.targets) a |= 1ull << require(g, t);
      g.must[require(g, m.src)].push_back(a);
    }
    for (auto& v : g.must) v = normalize_must(std::move(v));
    g.check();

    ParsedModel out;
    out.declared = kind;
    if (kind == ModelKind::KS) {
      Ks k;
      k.name = g.name;
      k.states = g.states;
      k.ap = g.ap;
      k.init = g.init;
      k.labels = g.labels;
      k.trans = g.may;
      k.check();
      out.ks = std::move(k);
    } else {
      if (kind == ModelKind::KMTS && validate(g) == ModelKind::GTS)
        throw ModelError("model '" + name + "' declared kmts but has a non-singleton must target");
      out.gts = std::move(g);
    }
    return out;
  }

  int require(const Gts& g, const std::string& s) {
    auto i = g.state_index(s);
    if (!i) throw ModelError("model '" + g.name + "' has no state '" + s + "'");
    return *i;
  }

  std::vector<std::string> take_name_list() {
    std::vector<std::string> names;
    if (tok_.word == ";") {  // empty list
      advance();
      return names;
    }
    names.push_back(take_ident("name"));
    while (tok_.word == ",") {
      advance();
      names.push_back(take_ident("name"));
    }
    expect_word(";");
    return names;
  }

  std::vector<Literal> take_literal_list() {
    std::vector<Literal> lits;
    if (tok_.word == ";") {
      advance();
      return lits;
    }
    lits.push_back(take_literal());
    while (tok_.word == ",") {
      advance();
      lits.push_back(take_literal());
    }
    expect_word(";");
    return lits;
  }

  Literal take_literal() {
    bool neg = false;
    if (tok_.word == "!") {
      neg = true;
      advance();
    }
    return Literal{take_ident("proposition"), neg};
  }

  std::string take_ident(const std::string& what) {
    if (tok_.word.empty() || !(std::isalpha(static_cast<unsigned char>(tok_.word[0])) ||
                               tok_.word[0] == '_'))
      fail("expected " + what);
    std::string w = tok_.word;
    advance();
    return w;
  }

  void expect_word(const std::string& w) {
    if (tok_.word != w) fail("expected '" + w + "'");
    advance();
  }

  [[noreturn]] void fail(const std::string& msg) { fail_at(msg, tok_.line, tok_.col); }
  [[noreturn]] void fail_at(const std::string& msg, int line, int col) {
    throw ParseError(msg, line, col);
  }

  void advance() { tok_ = lex_.next(); }

  ModelLexer lex_;
  ModelLexer::Tok tok_;
  std::vector<std::string> states_, ap_, init_;
  std::vector<std::pair<std::string, std::vector<Literal>>> labels_;
  std::vector<std::pair<std::string, std::string>> may_;
  std::vector<RawMust> musts_;
};

}  // namespace

ParsedModel parse_model(const std::string& text) { return ModelParser(text).parse(); }

// ---------------------------------------------------------------------------
// Serialisation

namespace {

void write_header(std::ostringstream& out, const std::string& kind,
                  const std::string& name, const std::vector<std::string>& ap,
                  const std::vector<std::string>& states, StateSet init) {
  out << "model " << kind << ' ' << name << " {\n";
  out << "  ap:";
  for (size_t i = 0; i < ap.size(); ++i) out << (i ? ", " : " ") << ap[i];
  out << ";\n  states:";
  for (size_t i = 0; i < states.size(); ++i) out << (i ? ", " : " ") << states[i];
  out << ";\n  init:";
  bool first = true;
  for (size_t s = 0; s < states.size(); ++s)
    if (init >> s & 1) {
      out << (first ? " " : ", ") << states[s];
      first = false;
    }
  out << ";\n";
}

void write_labels(std::ostringstream& out, const std::vector<std::string>& states,
                  const std::vector<std::string>& ap, const std::vector<LabelSet>& labels) {
  for (size_t s = 0; s < states.size(); ++s) {
    if (labels[s].pos == 0 && labels[s].neg == 0) continue;
    out << "  label " << states[s] << ":";
    bool first = true;
    for (size_t j = 0; j < ap.size(); ++j) {
      if (labels[s].pos >> j & 1) {
        out << (first ? " " : ", ") << ap[j];
        first = false;
      }
      if (labels[s].neg >> j & 1) {
        out << (first ? " " : ", ") << '!' << ap[j];
        first = false;
      }
    }
    out << ";\n";
  }
}

}  // namespace

std::string serialize(const Ks& k) {
  std::ostringstream out;
  write_header(out, "ks", k.name, k.ap, k.states, k.init);
  write_labels(out, k.states, k.ap, k.labels);
  for (size_t s = 0; s < k.states.size(); ++s)
    for (size_t t = 0; t < k.states.size(); ++t)
      if (k.trans[s] >> t & 1)
        out << "  may " << k.states[s] << " -> " << k.states[t] << ";\n";
  out << "}\n";
  return out.str();
}

std::string serialize(const Gts& m) {
  std::ostringstream out;
  write_header(out, validate(m) == ModelKind::GTS ? "gts" : "kmts", m.name, m.ap,
               m.states, m.init);
  write_labels(out, m.states, m.ap, m.labels);
  for (size_t s = 0; s < m.states.size(); ++s)
    for (size_t t = 0; t < m.states.size(); ++t)
      if (m.may[s] >> t & 1)
        out << "  may " << m.states[s] << " -> " << m.states[t] << ";\n";
  for (size_t s = 0; s < m.states.size(); ++s)
    for (StateSet a : normalize_must(m.must[s])) {
      out << "  must " << m.states[s] << " -> {";
      bool first = true;
      for (size_t t = 0; t < m.states.size(); ++t)
        if (a >> t & 1) {
          out << (first ? "" : ", ") << m.states[t];
          first = false;
        }
      out << "};\n";
    }
  out << "}\n";
  return out.str();
}

std::string to_dot(const Gts& m) {
  std::ostringstream out;
  out << "digraph " << m.name << " {\n  rankdir=LR;\n";
  for (int s = 0; s < m.state_count(); ++s) {
    out << "  \"" << m.states[s] << "\" [label=\"" << m.states[s];
    auto lits = m.label_literals(s);
    if (!lits.empty()) {
      out << "\\n[";
      for (size_t i = 0; i < lits.size(); ++i) out << (i ? "," : "") << lits[i].str();
      out << "]";
    }
    out << "\"";
    if (m.init >> s & 1) out << ", penwidth=2";
    out << "];\n";
  }
  for (int s = 0; s < m.state_count(); ++s)
    for (int t = 0; t < m.state_count(); ++t)
      if (m.may[s] >> t & 1)
        out << "  \"" << m.states[s] << "\" -> \"" << m.states[t] << "\" [style=dashed];\n";
  int hyper = 0;
  for (int s = 0; s < m.state_count(); ++s)
    for (StateSet a : m.must[s]) {
      if (__builtin_popcountll(a) == 1) {
        int t = __builtin_ctzll(a);
        out << "  \"" << m.states[s] << "\" -> \"" << m.states[t] << "\" [style=solid];\n";
      } else {
        std::string j = "hyper" + std::to_string(hyper++);
        out << "  \"" << j << "\" [shape=point];\n";
        out << "  \"" << m.states[s] << "\" -> \"" << j << "\" [style=solid, arrowhead=none];\n";
        for (int t = 0; t < m.state_count(); ++t)
          if (a >> t & 1)
            out << "  \"" << j << "\" -> \"" << m.states[t] << "\" [style=solid];\n";
      }
    }
  out << "}\n";
  return out.str();
}

bool same_model(const Gts& a, const Gts& b) {
  if (a.state_count() != b.state_count()) return false;
  std::vector<int> map(a.state_count());  // a index -> b index
  for (int s = 0; s < a.state_count(); ++s) {
    auto i = b.state_index(a.states[s]);
    if (!i) return false;
    map[s] = *i;
  }
  std::vector<int> apmap(a.ap.size());
  if (a.ap.size() != b.ap.size()) return false;
  for (size_t j = 0; j < a.ap.size(); ++j) {
    auto i = find_name(b.ap, a.ap[j]);
    if (!i) return false;
    apmap[j] = *i;
  }
  auto remap_states = [&](StateSet m) {
    StateSet out = 0;
    for (int s = 0; s < a.state_count(); ++s)
      if (m >> s & 1) out |= 1ull << map[s];
    return out;
  };
  auto remap_props = [&](uint32_t m) {
    uint32_t out = 0;
    for (size_t j = 0; j < a.ap.size(); ++j)
      if (m >> j & 1) out |= 1u << apmap[j];
    return out;
  };
  if (remap_states(a.init) != b.init) return false;
  for (int s = 0; s < a.state_count(); ++s) {
    int t = map[s];
    if (remap_props(a.labels[s].pos) != b.labels[t].pos) return false;
    if (remap_props(a.labels[s].neg) != b.labels[t].neg) return false;
    if (remap_states(a.may[s]) != b.may[t]) return false;
    std::vector<StateSet> am;
    for (StateSet x : a.must[s]) am.push_back(remap_states(x));
    if (normalize_must(am) != normalize_must(b.must[t])) return false;
  }
  return true;
}

}  // namespace mucheck
