#pragma once

// First-order syntax: terms, formulas, printing and canonical keys.
//
// Terms and formulas are immutable values backed by shared nodes. Every node
// carries an alpha-invariant key computed at construction, so structural
// identity up to renaming of bound variables is a string comparison.

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace supded {

class Formula;
struct TermNode;
struct FormulaNode;

enum class TermKind { Var, Meta, App, Epsilon, Comprehension };

class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term meta(int id, std::string name);
  static Term app(std::string functor, std::vector<Term> args);
  static Term constant(std::string name) { return app(std::move(name), {}); }
  static Term epsilon(std::string binder, Formula body);
  // {pattern | body} where `binders` are bound in both pattern and body.
  static Term comprehension(std::vector<std::string> binders, Term pattern, Formula body);

  TermKind kind() const;
  // Variable name, functor symbol, or metavariable display name.
  const std::string& name() const;
  int meta_id() const;
  const std::vector<Term>& args() const;
  const std::vector<std::string>& binders() const;
  const Term& pattern() const;
  const Formula& body() const;

  const std::string& key() const;
  std::size_t hash() const;
  bool has_meta() const;
  std::size_t size() const;

  bool is_var() const { return kind() == TermKind::Var; }
  bool is_meta() const { return kind() == TermKind::Meta; }
  bool is_app() const { return kind() == TermKind::App; }
  bool is_epsilon() const { return kind() == TermKind::Epsilon; }
  bool is_comprehension() const { return kind() == TermKind::Comprehension; }
  bool is_app_of(const std::string& functor, std::size_t arity) const;

  explicit operator bool() const { return node_ != nullptr; }
  bool same_node(const Term& o) const { return node_ == o.node_; }

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

enum class FormulaKind { True, False, Atom, Equal, Not, And, Or, Implies, Iff, Forall, Exists };

class Formula {
 public:
  Formula() = default;

  static Formula top();
  static Formula bottom();
  static Formula atom(std::string predicate, std::vector<Term> args);
  static Formula equal(Term lhs, Term rhs);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula forall(std::string binder, Formula body);
  static Formula exists(std::string binder, Formula body);

  FormulaKind kind() const;
  // Predicate symbol for atoms ("=" for equalities), binder for quantifiers.
  const std::string& name() const;
  const std::vector<Term>& args() const;
  const Formula& operand() const;  // Not, quantifier body
  const Formula& lhs() const;
  const Formula& rhs() const;
  const std::string& binder() const { return name(); }
  const Formula& body() const { return operand(); }

  const std::string& key() const;
  std::size_t hash() const;
  bool has_meta() const;
  std::size_t size() const;

  bool is(FormulaKind k) const { return kind() == k; }
  bool is_atomic() const { return is(FormulaKind::Atom) || is(FormulaKind::Equal); }
  bool is_literal() const { return is_atomic() || (is(FormulaKind::Not) && operand().is_atomic()); }
  bool is_quantifier() const { return is(FormulaKind::Forall) || is(FormulaKind::Exists); }
  bool is_binary() const;

  explicit operator bool() const { return node_ != nullptr; }

  // Finalizes key and hash of a freshly built node.
  static Formula from_node(std::shared_ptr<FormulaNode> n);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct TermNode {
  TermKind kind{};
  std::string name;
  int meta_id = -1;
  std::vector<Term> args;
  std::vector<std::string> binders;
  Term pattern;
  Formula body;
  std::string key;
  std::size_t hash = 0;
  bool has_meta = false;
  std::size_t size = 1;
};

struct FormulaNode {
  FormulaKind kind{};
  std::string name;
  std::vector<Term> args;
  std::vector<Formula> subs;
  std::string key;
  std::size_t hash = 0;
  bool has_meta = false;
  std::size_t size = 1;
};

inline bool operator==(const Term& a, const Term& b) { return a.key() == b.key(); }
inline bool operator==(const Formula& a, const Formula& b) { return a.key() == b.key(); }

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};
struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Literal helpers.
bool is_positive_literal(const Formula& f);
const Formula& literal_atom(const Formula& f);
Formula complement(const Formula& f);

Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

// Free (unbound) variables; metavariables are never bound and are reported separately.
std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_vars(const Formula& f);
std::set<int> metas_of(const Term& t);
std::set<int> metas_of(const Formula& f);
// Outermost epsilon subterms in left-to-right order, without duplicates (by key).
std::vector<Term> epsilons_of(const Formula& f);
std::vector<Term> epsilons_of(const Term& t);
bool occurs_in(const Term& needle, const Term& hay);
bool occurs_in(const Term& needle, const Formula& hay);

// Printing in the TPTP-superset syntax accepted by the parser.
std::string to_string(const Term& t);
std::string to_string(const Formula& f);

}  // namespace supded
