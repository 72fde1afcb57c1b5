#include "mucheck/formula.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_set>

namespace mucheck {

std::string VarName::str() const {
  std::string s = base;
  for (size_t i = 0; i < index.size(); ++i) {
    s += (i == 0 ? '_' : '.');
    s += std::to_string(index[i]);
  }
  return s;
}

struct Formula::Node {
  Kind kind;
  uint32_t id;
  uint64_t hash;
  Literal lit;
  VarName var;
  Formula left;
  Formula right;
  std::vector<VarName> free;  // sorted, unique
  size_t size = 1;
};

namespace {

std::atomic<uint32_t> next_node_id{0};

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_string(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  return h;
}

uint64_t hash_var(const VarName& v) {
  uint64_t h = hash_string(v.base);
  for (int i : v.index) h = mix(h, static_cast<uint64_t>(i) + 7);
  return h;
}

std::vector<VarName> merge_free(const std::vector<VarName>& a,
                                const std::vector<VarName>& b) {
  std::vector<VarName> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

std::vector<VarName> erase_var(std::vector<VarName> v, const VarName& x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
  return v;
}

}  // namespace

Formula Formula::truth() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::True;
  n->id = next_node_id++;
  n->hash = 2;
  return Formula(std::move(n));
}

Formula Formula::falsity() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::False;
  n->id = next_node_id++;
  n->hash = 3;
  return Formula(std::move(n));
}

Formula Formula::lit(Literal l) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lit;
  n->id = next_node_id++;
  n->hash = mix(hash_string(l.name), l.negated ? 11 : 5);
  n->lit = std::move(l);
  return Formula(std::move(n));
}

Formula Formula::lit(std::string name, bool negated) {
  return lit(Literal{std::move(name), negated});
}

Formula Formula::var(VarName v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->id = next_node_id++;
  n->hash = mix(hash_var(v), 13);
  n->free = {v};
  n->var = std::move(v);
  return Formula(std::move(n));
}

struct FormulaBuilder {
  static Formula binary(Formula::Kind k, Formula a, Formula b, uint64_t tag) {
    if (!a.valid() || !b.valid()) throw std::logic_error("empty formula operand");
    auto n = std::make_shared<Formula::Node>();
    n->kind = k;
    n->id = next_node_id++;
    n->hash = mix(mix(tag, a.hash()), b.hash());
    n->size = 1 + a.size() + b.size();
    n->free = merge_free(a.free_vars(), b.free_vars());
    n->left = std::move(a);
    n->right = std::move(b);
    return Formula::adopt(std::move(n));
  }

  static Formula unary(Formula::Kind k, Formula a, uint64_t tag) {
    if (!a.valid()) throw std::logic_error("empty formula operand");
    auto n = std::make_shared<Formula::Node>();
    n->kind = k;
    n->id = next_node_id++;
    n->hash = mix(tag, a.hash());
    n->size = 1 + a.size();
    n->free = a.free_vars();
    n->left = std::move(a);
    return Formula::adopt(std::move(n));
  }

  static Formula fix(Formula::Kind k, VarName v, Formula body, uint64_t tag) {
    if (!body.valid()) throw std::logic_error("empty formula operand");
    auto n = std::make_shared<Formula::Node>();
    n->kind = k;
    n->id = next_node_id++;
    n->hash = mix(mix(tag, hash_var(v)), body.hash());
    n->size = 1 + body.size();
    n->free = erase_var(body.free_vars(), v);
    n->var = std::move(v);
    n->left = std::move(body);
    return Formula::adopt(std::move(n));
  }
};

Formula Formula::conj(Formula a, Formula b) {
  return FormulaBuilder::binary(Kind::And, std::move(a), std::move(b), 17);
}
Formula Formula::disj(Formula a, Formula b) {
  return FormulaBuilder::binary(Kind::Or, std::move(a), std::move(b), 19);
}
Formula Formula::box(Formula a) {
  return FormulaBuilder::unary(Kind::Box, std::move(a), 23);
}
Formula Formula::diamond(Formula a) {
  return FormulaBuilder::unary(Kind::Diamond, std::move(a), 29);
}
Formula Formula::mu(VarName v, Formula body) {
  return FormulaBuilder::fix(Kind::Mu, std::move(v), std::move(body), 31);
}
Formula Formula::nu(VarName v, Formula body) {
  return FormulaBuilder::fix(Kind::Nu, std::move(v), std::move(body), 37);
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Literal& Formula::literal() const { return node_->lit; }
const VarName& Formula::var_name() const { return node_->var; }
const Formula& Formula::child() const { return node_->left; }
const Formula& Formula::right() const { return node_->right; }
bool Formula::closed() const { return node_->free.empty(); }
const std::vector<VarName>& Formula::free_vars() const { return node_->free; }
uint32_t Formula::id() const { return node_->id; }
uint64_t Formula::hash() const { return node_->hash; }
size_t Formula::size() const { return node_->size; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind || a.hash != b.hash || a.size != b.size) return false;
  switch (a.kind) {
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Lit:
      return a.lit == b.lit;
    case Kind::Var:
      return a.var == b.var;
    case Kind::And:
    case Kind::Or:
      return a.left == b.left && a.right == b.right;
    case Kind::Box:
    case Kind::Diamond:
      return a.left == b.left;
    case Kind::Mu:
    case Kind::Nu:
      return a.var == b.var && a.left == b.left;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum Type {
    TTrue, TFalse, TProp, TVar, TAnd, TOr, TBox, TDiamond,
    TMu, TNu, TDot, TBang, TLParen, TRParen, TEnd
  };
  Type type;
  std::string text;   // identifier text for TProp
  VarName var;        // for TVar
  int line, col;
};

class FormulaLexer {
 public:
  explicit FormulaLexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col_);
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      bump();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.type = Token::TEnd;
      return;
    }
    char c = text_[pos_];
    if (c == '(') { bump(); tok_.type = Token::TLParen; return; }
    if (c == ')') { bump(); tok_.type = Token::TRParen; return; }
    if (c == '.') { bump(); tok_.type = Token::TDot; return; }
    if (c == '!') { bump(); tok_.type = Token::TBang; return; }
    if (c == '/') {
      bump();
      if (pos_ < text_.size() && text_[pos_] == '\\') { bump(); tok_.type = Token::TAnd; return; }
      fail("expected '\\' after '/'");
    }
    if (c == '\\') {
      bump();
      if (pos_ < text_.size() && text_[pos_] == '/') { bump(); tok_.type = Token::TOr; return; }
      fail("expected '/' after '\\'");
    }
    if (c == '[') {
      bump();
      if (pos_ < text_.size() && text_[pos_] == ']') { bump(); tok_.type = Token::TBox; return; }
      fail("expected ']' after '['");
    }
    if (c == '<') {
      bump();
      if (pos_ < text_.size() && text_[pos_] == '>') { bump(); tok_.type = Token::TDiamond; return; }
      fail("expected '>' after '<'");
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      lex_identifier();
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void lex_identifier() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      bump();
    std::string word = text_.substr(start, pos_ - start);
    if (word == "true") { tok_.type = Token::TTrue; return; }
    if (word == "false") { tok_.type = Token::TFalse; return; }
    if (word == "mu") { tok_.type = Token::TMu; return; }
    if (word == "nu") { tok_.type = Token::TNu; return; }
    if (std::islower(static_cast<unsigned char>(word[0]))) {
      tok_.type = Token::TProp;
      tok_.text = word;
      return;
    }
    // Uppercase start: a recursion variable, possibly indexed (BASE_d1.d2...).
    tok_.type = Token::TVar;
    tok_.var = split_indexed(word);
    if (!tok_.var.index.empty()) {
      // Index words may continue across '.' boundaries: X_2.1
      while (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        bump();  // '.'
        size_t dstart = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          bump();
        tok_.var.index.push_back(std::stoi(text_.substr(dstart, pos_ - dstart)));
      }
    }
  }

  // "X_2" -> (X, [2]); "Row_12" -> (Row, [12]); "X_a" -> (X_a, []).
  static VarName split_indexed(const std::string& word) {
    size_t us = word.rfind('_');
    if (us == std::string::npos || us == 0 || us + 1 >= word.size())
      return VarName(word);
    bool digits = true;
    for (size_t i = us + 1; i < word.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(word[i]))) digits = false;
    if (!digits) return VarName(word);
    VarName v(word.substr(0, us));
    v.index.push_back(std::stoi(word.substr(us + 1)));
    return v;
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
  Token tok_;
};

class FormulaParser {
 public:
  explicit FormulaParser(const std::string& text) : lex_(text) {}

  Formula parse() {
    Formula f = parse_or();
    expect(Token::TEnd, "end of formula");
    return f;
  }

 private:
  Formula parse_or() {
    Formula lhs = parse_and();
    if (lex_.peek().type == Token::TOr) {
      lex_.take();
      return Formula::disj(std::move(lhs), parse_or());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    if (lex_.peek().type == Token::TAnd) {
      lex_.take();
      return Formula::conj(std::move(lhs), parse_and());
    }
    return lhs;
  }

  Formula parse_unary() {
    const Token& t = lex_.peek();
    switch (t.type) {
      case Token::TBox:
        lex_.take();
        return Formula::box(parse_unary());
      case Token::TDiamond:
        lex_.take();
        return Formula::diamond(parse_unary());
      case Token::TMu:
      case Token::TNu:
        return parse_binder();
      default:
        return parse_atom();
    }
  }

  Formula parse_binder() {
    Token b = lex_.take();
    Token v = expect(Token::TVar, "recursion variable");
    expect(Token::TDot, "'.'");
    Formula body = parse_or();
    return b.type == Token::TMu ? Formula::mu(v.var, std::move(body))
                                : Formula::nu(v.var, std::move(body));
  }

  Formula parse_atom() {
    Token t = lex_.take();
    switch (t.type) {
      case Token::TTrue:
        return Formula::truth();
      case Token::TFalse:
        return Formula::falsity();
      case Token::TProp:
        return Formula::lit(t.text, false);
      case Token::TVar:
        return Formula::var(t.var);
      case Token::TBang: {
        const Token& n = lex_.peek();
        if (n.type != Token::TProp)
          throw ParseError("negation applied to a non-atom", n.line, n.col);
        return Formula::lit(lex_.take().text, true);
      }
      case Token::TLParen: {
        Formula f = parse_or();
        expect(Token::TRParen, "')'");
        return f;
      }
      default:
        throw ParseError("expected a formula", t.line, t.col);
    }
  }

  Token expect(Token::Type type, const std::string& what) {
    const Token& t = lex_.peek();
    if (t.type != type)
      throw ParseError("expected " + what, t.line, t.col);
    return lex_.take();
  }

  FormulaLexer lex_;
};

}  // namespace

Formula parse_formula(const std::string& text) {
  return FormulaParser(text).parse();
}

// ---------------------------------------------------------------------------
// Printing.  Precedence: or < and < modal < atom; binder bodies are always
// parenthesised, and a binder used as an operand is parenthesised itself.

namespace {

constexpr int kPrecBinder = 0;
constexpr int kPrecOr = 1;
constexpr int kPrecAnd = 2;
constexpr int kPrecModal = 3;
constexpr int kPrecAtom = 4;

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Or: return kPrecOr;
    case Formula::Kind::And: return kPrecAnd;
    case Formula::Kind::Box:
    case Formula::Kind::Diamond: return kPrecModal;
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: return kPrecBinder;
    default: return kPrecAtom;
  }
}

void print_rec(const Formula& f, int min_prec, std::string& out) {
  bool parens = precedence(f) < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case Formula::Kind::True: out += "true"; break;
    case Formula::Kind::False: out += "false"; break;
    case Formula::Kind::Lit: out += f.literal().str(); break;
    case Formula::Kind::Var: out += f.var_name().str(); break;
    case Formula::Kind::And:
      print_rec(f.child(), kPrecAnd + 1, out);
      out += " /\\ ";
      print_rec(f.right(), kPrecAnd, out);
      break;
    case Formula::Kind::Or:
      print_rec(f.child(), kPrecOr + 1, out);
      out += " \\/ ";
      print_rec(f.right(), kPrecOr, out);
      break;
    case Formula::Kind::Box:
      out += "[]";
      print_rec(f.child(), kPrecModal, out);
      break;
    case Formula::Kind::Diamond:
      out += "<>";
      print_rec(f.child(), kPrecModal, out);
      break;
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      out += f.kind() == Formula::Kind::Mu ? "mu " : "nu ";
      out += f.var_name().str();
      out += ". (";
      print_rec(f.child(), kPrecBinder, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_rec(f, kPrecBinder, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural analysis

namespace {

struct FormulaHashEq {
  size_t operator()(const Formula& f) const { return static_cast<size_t>(f.hash()); }
  bool operator()(const Formula& a, const Formula& b) const { return a == b; }
};

void collect_sub(const Formula& f, std::vector<Formula>& out,
                 std::unordered_set<Formula, FormulaHashEq, FormulaHashEq>& seen) {
  if (!seen.insert(f).second) return;
  out.push_back(f);
  switch (f.kind()) {
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_sub(f.child(), out, seen);
      collect_sub(f.right(), out, seen);
      break;
    case Formula::Kind::Box:
    case Formula::Kind::Diamond:
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      collect_sub(f.child(), out, seen);
      break;
    default:
      break;
  }
}

}  // namespace

FormulaInfo analyze(const Formula& f) {
  FormulaInfo info;
  std::unordered_set<Formula, FormulaHashEq, FormulaHashEq> seen(16);
  collect_sub(f, info.sub, seen);

  std::map<VarName, std::vector<Formula>> binders;  // variable -> binder subformulas
  for (const Formula& g : info.sub) {
    switch (g.kind()) {
      case Formula::Kind::Var:
        info.vars.insert(g.var_name());
        break;
      case Formula::Kind::Mu:
        info.vars.insert(g.var_name());
        info.mu_vars.insert(g.var_name());
        binders[g.var_name()].push_back(g);
        break;
      case Formula::Kind::Nu:
        info.vars.insert(g.var_name());
        info.nu_vars.insert(g.var_name());
        binders[g.var_name()].push_back(g);
        break;
      default:
        break;
    }
  }
  for (const VarName& v : f.free_vars()) info.free_vars.insert(v);

  info.well_formed = true;
  for (const auto& [v, bs] : binders)
    if (bs.size() > 1) info.well_formed = false;
  return info;
}

Formula unfold(const VarName& x, const Formula& f) {
  FormulaInfo info = analyze(f);
  for (const Formula& g : info.sub)
    if (g.is_binder() && g.var_name() == x) return g.child();
  throw std::runtime_error("variable " + x.str() + " is not bound in the formula");
}

}  // namespace mucheck
