#include "supded/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>
#include <unordered_set>

namespace supded {

namespace {

void key_term(std::string& out, const Term& t, std::vector<std::string>& env);
void key_formula(std::string& out, const Formula& f, std::vector<std::string>& env);

void key_term(std::string& out, const Term& t, std::vector<std::string>& env) {
  switch (t.kind()) {
    case TermKind::Var: {
      for (std::size_t i = env.size(); i-- > 0;) {
        if (env[i] == t.name()) {
          out += '#';
          out += std::to_string(env.size() - 1 - i);
          return;
        }
      }
      out += "'";
      out += t.name();
      return;
    }
    case TermKind::Meta:
      out += '?';
      out += std::to_string(t.meta_id());
      return;
    case TermKind::App:
      out += t.name();
      if (!t.args().empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          if (i) out += ',';
          key_term(out, t.args()[i], env);
        }
        out += ')';
      }
      return;
    case TermKind::Epsilon:
      out += "@(";
      env.push_back(t.binders()[0]);
      key_formula(out, t.body(), env);
      env.pop_back();
      out += ')';
      return;
    case TermKind::Comprehension:
      out += "{";
      out += std::to_string(t.binders().size());
      out += ':';
      for (const auto& b : t.binders()) env.push_back(b);
      key_term(out, t.pattern(), env);
      out += '|';
      key_formula(out, t.body(), env);
      env.resize(env.size() - t.binders().size());
      out += '}';
      return;
  }
}

const char* connective_key(FormulaKind k) {
  switch (k) {
    case FormulaKind::And: return "&";
    case FormulaKind::Or: return "|";
    case FormulaKind::Implies: return "=>";
    case FormulaKind::Iff: return "<=>";
    default: return "?";
  }
}

void key_formula(std::string& out, const Formula& f, std::vector<std::string>& env) {
  switch (f.kind()) {
    case FormulaKind::True: out += "T"; return;
    case FormulaKind::False: out += "F"; return;
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      out += f.name();
      out += '(';
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += ',';
        key_term(out, f.args()[i], env);
      }
      out += ')';
      return;
    case FormulaKind::Not:
      out += '~';
      key_formula(out, f.operand(), env);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
      out += '(';
      key_formula(out, f.lhs(), env);
      out += connective_key(f.kind());
      key_formula(out, f.rhs(), env);
      out += ')';
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      out += f.is(FormulaKind::Forall) ? "A." : "E.";
      env.push_back(f.binder());
      key_formula(out, f.body(), env);
      env.pop_back();
      return;
  }
}

template <typename Node>
void finish_key(Node& n, const std::string& k) {
  n.key = k;
  n.hash = std::hash<std::string>{}(k);
}

const std::vector<Term> kNoTerms;
const std::vector<std::string> kNoNames;
const Term kNoTerm;
const Formula kNoFormula;
const std::string kNoName;

}  // namespace

// ---------------------------------------------------------------- Term

Term Term::var(std::string name) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Var;
  n->name = std::move(name);
  Term t(n);
  std::string k;
  std::vector<std::string> env;
  key_term(k, t, env);
  finish_key(*n, k);
  return t;
}

Term Term::meta(int id, std::string name) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Meta;
  n->meta_id = id;
  n->name = std::move(name);
  n->has_meta = true;
  Term t(n);
  finish_key(*n, "?" + std::to_string(id));
  return t;
}

Term Term::app(std::string functor, std::vector<Term> args) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::App;
  n->name = std::move(functor);
  for (const auto& a : args) {
    n->has_meta = n->has_meta || a.has_meta();
    n->size += a.size();
  }
  n->args = std::move(args);
  Term t(n);
  std::string k;
  std::vector<std::string> env;
  key_term(k, t, env);
  finish_key(*n, k);
  return t;
}

Term Term::epsilon(std::string binder, Formula body) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Epsilon;
  n->binders = {std::move(binder)};
  n->has_meta = body.has_meta();
  n->size = 1 + body.size();
  n->body = std::move(body);
  Term t(n);
  std::string k;
  std::vector<std::string> env;
  key_term(k, t, env);
  finish_key(*n, k);
  return t;
}

Term Term::comprehension(std::vector<std::string> binders, Term pattern, Formula body) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Comprehension;
  n->binders = std::move(binders);
  n->has_meta = pattern.has_meta() || body.has_meta();
  n->size = 1 + pattern.size() + body.size();
  n->pattern = std::move(pattern);
  n->body = std::move(body);
  Term t(n);
  std::string k;
  std::vector<std::string> env;
  key_term(k, t, env);
  finish_key(*n, k);
  return t;
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
int Term::meta_id() const { return node_->meta_id; }
const std::vector<Term>& Term::args() const { return node_ ? node_->args : kNoTerms; }
const std::vector<std::string>& Term::binders() const { return node_ ? node_->binders : kNoNames; }
const Term& Term::pattern() const { return node_ ? node_->pattern : kNoTerm; }
const Formula& Term::body() const { return node_ ? node_->body : kNoFormula; }
const std::string& Term::key() const { return node_ ? node_->key : kNoName; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
bool Term::has_meta() const { return node_ && node_->has_meta; }
std::size_t Term::size() const { return node_ ? node_->size : 0; }

bool Term::is_app_of(const std::string& functor, std::size_t arity) const {
  return node_ && node_->kind == TermKind::App && node_->name == functor && node_->args.size() == arity;
}

// ---------------------------------------------------------------- Formula

namespace {

Formula make_formula(FormulaKind kind, std::string name, std::vector<Term> args, std::vector<Formula> subs);

}  // namespace

Formula Formula::top() { return make_formula(FormulaKind::True, {}, {}, {}); }
Formula Formula::bottom() { return make_formula(FormulaKind::False, {}, {}, {}); }
Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  if (predicate == "=") throw std::invalid_argument("use Formula::equal for equalities");
  return make_formula(FormulaKind::Atom, std::move(predicate), std::move(args), {});
}
Formula Formula::equal(Term lhs, Term rhs) {
  return make_formula(FormulaKind::Equal, "=", {std::move(lhs), std::move(rhs)}, {});
}
Formula Formula::negate(Formula f) { return make_formula(FormulaKind::Not, {}, {}, {std::move(f)}); }
Formula Formula::conj(Formula a, Formula b) {
  return make_formula(FormulaKind::And, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::disj(Formula a, Formula b) {
  return make_formula(FormulaKind::Or, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::implies(Formula a, Formula b) {
  return make_formula(FormulaKind::Implies, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::iff(Formula a, Formula b) {
  return make_formula(FormulaKind::Iff, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::forall(std::string binder, Formula body) {
  return make_formula(FormulaKind::Forall, std::move(binder), {}, {std::move(body)});
}
Formula Formula::exists(std::string binder, Formula body) {
  return make_formula(FormulaKind::Exists, std::move(binder), {}, {std::move(body)});
}

namespace {

Formula make_formula(FormulaKind kind, std::string name, std::vector<Term> args, std::vector<Formula> subs) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->name = std::move(name);
  for (const auto& a : args) {
    n->has_meta = n->has_meta || a.has_meta();
    n->size += a.size();
  }
  for (const auto& s : subs) {
    n->has_meta = n->has_meta || s.has_meta();
    n->size += s.size();
  }
  n->args = std::move(args);
  n->subs = std::move(subs);
  return Formula::from_node(n);
}

}  // namespace

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const std::vector<Term>& Formula::args() const { return node_ ? node_->args : kNoTerms; }
const Formula& Formula::operand() const { return node_->subs.at(0); }
const Formula& Formula::lhs() const { return node_->subs.at(0); }
const Formula& Formula::rhs() const { return node_->subs.at(1); }
const std::string& Formula::key() const { return node_ ? node_->key : kNoName; }
std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }
bool Formula::has_meta() const { return node_ && node_->has_meta; }
std::size_t Formula::size() const { return node_ ? node_->size : 0; }

bool Formula::is_binary() const {
  switch (kind()) {
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff: return true;
    default: return false;
  }
}

Formula Formula::from_node(std::shared_ptr<FormulaNode> n) {
  Formula f(n);
  std::string k;
  std::vector<std::string> env;
  key_formula(k, f, env);
  finish_key(*n, k);
  return f;
}

// ---------------------------------------------------------------- helpers

bool is_positive_literal(const Formula& f) { return f.is_atomic(); }

const Formula& literal_atom(const Formula& f) { return f.is(FormulaKind::Not) ? f.operand() : f; }

Formula complement(const Formula& f) { return f.is(FormulaKind::Not) ? f.operand() : Formula::negate(f); }

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::top();
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::conj(fs[i], acc);
  return acc;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::bottom();
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::disj(fs[i], acc);
  return acc;
}

namespace {

struct Collector {
  std::vector<std::string> bound;
  std::set<std::string> vars;
  std::set<int> metas;

  bool is_bound(const std::string& v) const { return std::find(bound.begin(), bound.end(), v) != bound.end(); }

  void term(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
        if (!is_bound(t.name())) vars.insert(t.name());
        return;
      case TermKind::Meta: metas.insert(t.meta_id()); return;
      case TermKind::App:
        for (const auto& a : t.args()) term(a);
        return;
      case TermKind::Epsilon:
      case TermKind::Comprehension:
        for (const auto& b : t.binders()) bound.push_back(b);
        if (t.is_comprehension()) term(t.pattern());
        formula(t.body());
        bound.resize(bound.size() - t.binders().size());
        return;
    }
  }

  void formula(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::True:
      case FormulaKind::False: return;
      case FormulaKind::Atom:
      case FormulaKind::Equal:
        for (const auto& a : f.args()) term(a);
        return;
      case FormulaKind::Not: formula(f.operand()); return;
      case FormulaKind::Forall:
      case FormulaKind::Exists:
        bound.push_back(f.binder());
        formula(f.body());
        bound.pop_back();
        return;
      default:
        formula(f.lhs());
        formula(f.rhs());
        return;
    }
  }
};

void collect_eps(const Term& t, std::vector<Term>& out, std::unordered_set<std::string>& seen);

void collect_eps(const Formula& f, std::vector<Term>& out, std::unordered_set<std::string>& seen) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return;
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      for (const auto& a : f.args()) collect_eps(a, out, seen);
      return;
    case FormulaKind::Not:
    case FormulaKind::Forall:
    case FormulaKind::Exists: collect_eps(f.operand(), out, seen); return;
    default:
      collect_eps(f.lhs(), out, seen);
      collect_eps(f.rhs(), out, seen);
      return;
  }
}

void collect_eps(const Term& t, std::vector<Term>& out, std::unordered_set<std::string>& seen) {
  switch (t.kind()) {
    case TermKind::Epsilon:
      if (seen.insert(t.key()).second) out.push_back(t);
      return;
    case TermKind::App:
      for (const auto& a : t.args()) collect_eps(a, out, seen);
      return;
    case TermKind::Comprehension:
      collect_eps(t.pattern(), out, seen);
      collect_eps(t.body(), out, seen);
      return;
    default: return;
  }
}

bool occurs_term(const Term& needle, const Term& hay);
bool occurs_formula(const Term& needle, const Formula& hay);

bool occurs_term(const Term& needle, const Term& hay) {
  if (hay.key() == needle.key()) return true;
  switch (hay.kind()) {
    case TermKind::App:
      return std::any_of(hay.args().begin(), hay.args().end(), [&](const Term& a) { return occurs_term(needle, a); });
    case TermKind::Epsilon: return occurs_formula(needle, hay.body());
    case TermKind::Comprehension: return occurs_term(needle, hay.pattern()) || occurs_formula(needle, hay.body());
    default: return false;
  }
}

bool occurs_formula(const Term& needle, const Formula& hay) {
  switch (hay.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return false;
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return std::any_of(hay.args().begin(), hay.args().end(), [&](const Term& a) { return occurs_term(needle, a); });
    case FormulaKind::Not:
    case FormulaKind::Forall:
    case FormulaKind::Exists: return occurs_formula(needle, hay.operand());
    default: return occurs_formula(needle, hay.lhs()) || occurs_formula(needle, hay.rhs());
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  Collector c;
  c.term(t);
  return c.vars;
}
std::set<std::string> free_vars(const Formula& f) {
  Collector c;
  c.formula(f);
  return c.vars;
}
std::set<int> metas_of(const Term& t) {
  Collector c;
  c.term(t);
  return c.metas;
}
std::set<int> metas_of(const Formula& f) {
  Collector c;
  c.formula(f);
  return c.metas;
}

std::vector<Term> epsilons_of(const Formula& f) {
  std::vector<Term> out;
  std::unordered_set<std::string> seen;
  collect_eps(f, out, seen);
  return out;
}
std::vector<Term> epsilons_of(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<std::string> seen;
  collect_eps(t, out, seen);
  return out;
}

bool occurs_in(const Term& needle, const Term& hay) { return occurs_term(needle, hay); }
bool occurs_in(const Term& needle, const Formula& hay) { return occurs_formula(needle, hay); }

// ---------------------------------------------------------------- printing

namespace {

bool is_lower_word(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string quote_atom(const std::string& s) {
  if (is_lower_word(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

class Printer {
 public:
  explicit Printer(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}

  void term(std::string& out, const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: out += lookup(t.name()); return;
      case TermKind::Meta:
        out += '?';
        out += t.name().empty() ? "M" : t.name();
        out += '_';
        out += std::to_string(t.meta_id());
        return;
      case TermKind::App:
        out += quote_atom(t.name());
        if (!t.args().empty()) {
          out += '(';
          for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i) out += ',';
            term(out, t.args()[i]);
          }
          out += ')';
        }
        return;
      case TermKind::Epsilon: {
        out += "@[";
        out += bind(t.binders()[0]);
        out += "]: (";
        formula(out, t.body());
        out += ')';
        unbind(1);
        return;
      }
      case TermKind::Comprehension: {
        out += "{[";
        for (std::size_t i = 0; i < t.binders().size(); ++i) {
          if (i) out += ',';
          out += bind(t.binders()[i]);
        }
        out += "]: ";
        term(out, t.pattern());
        out += " | ";
        formula(out, t.body());
        out += '}';
        unbind(t.binders().size());
        return;
      }
    }
  }

  void formula(std::string& out, const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::True: out += "$true"; return;
      case FormulaKind::False: out += "$false"; return;
      case FormulaKind::Atom:
        out += quote_atom(f.name());
        if (!f.args().empty()) {
          out += '(';
          for (std::size_t i = 0; i < f.args().size(); ++i) {
            if (i) out += ',';
            term(out, f.args()[i]);
          }
          out += ')';
        }
        return;
      case FormulaKind::Equal:
        term(out, f.args()[0]);
        out += " = ";
        term(out, f.args()[1]);
        return;
      case FormulaKind::Not:
        if (f.operand().is(FormulaKind::Equal)) {
          term(out, f.operand().args()[0]);
          out += " != ";
          term(out, f.operand().args()[1]);
          return;
        }
        out += '~';
        unary_operand(out, f.operand());
        return;
      case FormulaKind::Forall:
      case FormulaKind::Exists:
        out += f.is(FormulaKind::Forall) ? "![" : "?[";
        out += bind(f.binder());
        out += "]: ";
        unary_operand(out, f.body());
        unbind(1);
        return;
      default: {
        const char* op = f.is(FormulaKind::And) ? " & "
                         : f.is(FormulaKind::Or) ? " | "
                         : f.is(FormulaKind::Implies) ? " => "
                                                      : " <=> ";
        out += '(';
        formula(out, f.lhs());
        out += op;
        formula(out, f.rhs());
        out += ')';
        return;
      }
    }
  }

 private:
  void unary_operand(std::string& out, const Formula& f) {
    if (f.is(FormulaKind::Equal) || (f.is(FormulaKind::Not) && f.operand().is(FormulaKind::Equal))) {
      out += '(';
      formula(out, f);
      out += ')';
    } else {
      formula(out, f);
    }
  }

  std::string lookup(const std::string& name) const {
    for (std::size_t i = env_.size(); i-- > 0;)
      if (env_[i].first == name) return env_[i].second;
    return name;
  }

  std::string bind(const std::string& original) {
    std::string base;
    for (char c : original)
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') base += c;
    if (base.empty() || !std::isalpha(static_cast<unsigned char>(base[0]))) base = "V" + base;
    base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
    std::string candidate = base;
    for (int i = 1; in_use(candidate); ++i) candidate = base + std::to_string(i);
    env_.emplace_back(original, candidate);
    return candidate;
  }

  bool in_use(const std::string& printed) const {
    if (reserved_.count(printed)) return true;
    return std::any_of(env_.begin(), env_.end(), [&](const auto& p) { return p.second == printed; });
  }

  void unbind(std::size_t n) { env_.resize(env_.size() - n); }

  std::set<std::string> reserved_;
  std::vector<std::pair<std::string, std::string>> env_;
};

}  // namespace

std::string to_string(const Term& t) {
  if (!t) return "<null>";
  Printer p(free_vars(t));
  std::string out;
  p.term(out, t);
  return out;
}

std::string to_string(const Formula& f) {
  if (!f) return "<null>";
  Printer p(free_vars(f));
  std::string out;
  p.formula(out, f);
  return out;
}

}  // namespace supded
