// formula.hpp — mu-calculus syntax in positive form.
//
// Formulas are immutable trees with shared subterms.  Recursion variables
// carry an index word (a sequence of naturals) so that formula rewrites can
// mint fresh, related names; user-written variables have the empty word.
//
// Concrete grammar (one formula per string):
//
//   or    := and ( '\/' or )?
//   and   := unary ( '/\' and )?
//   unary := '[]' unary | '<>' unary | binder | atom
//   binder:= ('mu'|'nu') VAR '.' or
//   atom  := 'true' | 'false' | PROP | '!' PROP | VAR | '(' or ')'
//
// Propositions are lowercase identifiers, variables uppercase; an indexed
// variable is written BASE_d1.d2...dk (e.g. X_2.1).

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mucheck {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line, int col)
      : std::runtime_error(what), line(line), col(col) {}
  int line = 0;
  int col = 0;
};

struct Literal {
  std::string name;
  bool negated = false;

  Literal complement() const { return Literal{name, !negated}; }
  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
  std::string str() const { return negated ? "!" + name : name; }
};

struct VarName {
  std::string base;
  std::vector<int> index;  // empty for user-written variables

  VarName() = default;
  explicit VarName(std::string b, std::vector<int> idx = {})
      : base(std::move(b)), index(std::move(idx)) {}

  VarName with_appended(int k) const {
    VarName v = *this;
    v.index.push_back(k);
    return v;
  }

  bool operator==(const VarName&) const = default;
  auto operator<=>(const VarName&) const = default;
  std::string str() const;
};

class Formula {
 public:
  enum class Kind : uint8_t {
    True, False, Lit, Var, And, Or, Box, Diamond, Mu, Nu
  };

  struct Node;

  Formula() = default;  // empty handle; every factory yields a valid one

  static Formula truth();
  static Formula falsity();
  static Formula lit(Literal l);
  static Formula lit(std::string name, bool negated = false);
  static Formula var(VarName v);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula box(Formula a);
  static Formula diamond(Formula a);
  static Formula mu(VarName v, Formula body);
  static Formula nu(VarName v, Formula body);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const Literal& literal() const;    // Lit
  const VarName& var_name() const;   // Var, Mu, Nu
  const Formula& child() const;      // Box, Diamond, Mu, Nu; left of And/Or
  const Formula& right() const;      // And, Or
  bool is_binder() const { return kind() == Kind::Mu || kind() == Kind::Nu; }

  bool closed() const;                           // no free variables
  const std::vector<VarName>& free_vars() const;  // sorted
  uint32_t id() const;       // process-unique node id (stable per node)
  uint64_t hash() const;
  size_t size() const;       // node count

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }
  bool same_node(const Formula& other) const { return node_ == other.node_; }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula adopt(std::shared_ptr<const Node> n) { return Formula(std::move(n)); }
  friend struct FormulaBuilder;
  std::shared_ptr<const Node> node_;
};

struct FormulaInfo {
  std::vector<Formula> sub;      // Sub(f), deduplicated, preorder of first occurrence
  std::set<VarName> vars;        // every variable occurring (free, bound or binding)
  std::set<VarName> mu_vars;     // variables with a mu binder in Sub(f)
  std::set<VarName> nu_vars;     // variables with a nu binder in Sub(f)
  std::set<VarName> free_vars;
  bool well_formed = false;      // at most one binder subformula per variable
};

Formula parse_formula(const std::string& text);
std::string print_formula(const Formula& f);
FormulaInfo analyze(const Formula& f);

// Body of the unique binder for x in f.  Throws EvalError-style
// std::runtime_error if x has no binder in Sub(f).
Formula unfold(const VarName& x, const Formula& f);

}  // namespace mucheck
