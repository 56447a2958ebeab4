#include "supded/unify.hpp"

#include <algorithm>

namespace supded {

namespace {

using Env = std::vector<std::string>;

int lookup(const Env& env, const std::string& name) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == name) return static_cast<int>(env.size() - 1 - i);
  return -1;
}

bool mentions_bound(const Term& t, const Env& env) {
  if (env.empty()) return false;
  for (const auto& v : free_vars(t))
    if (lookup(env, v) >= 0) return true;
  return false;
}

// ---------------------------------------------------------------- substitution

class Substituter {
 public:
  explicit Substituter(const Substitution& s) : s_(s) {
    for (const auto& [_, t] : s.vars)
      for (const auto& v : free_vars(t)) range_vars_.insert(v);
    for (const auto& [_, t] : s.metas)
      for (const auto& v : free_vars(t)) range_vars_.insert(v);
  }

  Term term(const Term& t, std::map<std::string, Term>& vars) {
    if (vars.empty() && (s_.metas.empty() || !t.has_meta())) return t;
    switch (t.kind()) {
      case TermKind::Var: {
        auto it = vars.find(t.name());
        return it == vars.end() ? t : it->second;
      }
      case TermKind::Meta: {
        auto it = s_.metas.find(t.meta_id());
        return it == s_.metas.end() ? t : it->second;
      }
      case TermKind::App: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        bool changed = false;
        for (const auto& a : t.args()) {
          args.push_back(term(a, vars));
          changed = changed || !args.back().same_node(a);
        }
        return changed ? Term::app(t.name(), std::move(args)) : t;
      }
      case TermKind::Epsilon: {
        std::vector<std::string> bs = t.binders();
        auto saved = vars;
        rebind(bs, vars, free_vars(t.body()));
        Formula body = formula(t.body(), vars);
        vars = std::move(saved);
        return Term::epsilon(bs[0], body);
      }
      case TermKind::Comprehension: {
        std::vector<std::string> bs = t.binders();
        std::set<std::string> fv = free_vars(t.body());
        for (const auto& v : free_vars(t.pattern())) fv.insert(v);
        auto saved = vars;
        rebind(bs, vars, fv);
        Term pat = term(t.pattern(), vars);
        Formula body = formula(t.body(), vars);
        vars = std::move(saved);
        return Term::comprehension(bs, pat, body);
      }
    }
    return t;
  }

  Formula formula(const Formula& f, std::map<std::string, Term>& vars) {
    if (vars.empty() && (s_.metas.empty() || !f.has_meta())) return f;
    switch (f.kind()) {
      case FormulaKind::True:
      case FormulaKind::False: return f;
      case FormulaKind::Atom:
      case FormulaKind::Equal: {
        std::vector<Term> args;
        bool changed = false;
        for (const auto& a : f.args()) {
          args.push_back(term(a, vars));
          changed = changed || !args.back().same_node(a);
        }
        if (!changed) return f;
        return f.is(FormulaKind::Equal) ? Formula::equal(args[0], args[1]) : Formula::atom(f.name(), args);
      }
      case FormulaKind::Not: return Formula::negate(formula(f.operand(), vars));
      case FormulaKind::And: return Formula::conj(formula(f.lhs(), vars), formula(f.rhs(), vars));
      case FormulaKind::Or: return Formula::disj(formula(f.lhs(), vars), formula(f.rhs(), vars));
      case FormulaKind::Implies: return Formula::implies(formula(f.lhs(), vars), formula(f.rhs(), vars));
      case FormulaKind::Iff: return Formula::iff(formula(f.lhs(), vars), formula(f.rhs(), vars));
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        std::vector<std::string> bs{f.binder()};
        auto saved = vars;
        rebind(bs, vars, free_vars(f.body()));
        Formula body = formula(f.body(), vars);
        vars = std::move(saved);
        return f.is(FormulaKind::Forall) ? Formula::forall(bs[0], body) : Formula::exists(bs[0], body);
      }
    }
    return f;
  }

 private:
  // Shadows binders and renames those that would capture a range variable.
  bool rebind(std::vector<std::string>& binders, std::map<std::string, Term>& vars, const std::set<std::string>& body_fv) {
    bool renamed = false;
    for (auto& b : binders) {
      vars.erase(b);
      if (!range_vars_.count(b)) continue;
      std::string fresh = b;
      while (range_vars_.count(fresh) || body_fv.count(fresh) ||
             std::count(binders.begin(), binders.end(), fresh))
        fresh += "'";
      vars[b] = Term::var(fresh);
      b = fresh;
      renamed = true;
    }
    return renamed;
  }

  const Substitution& s_;
  std::set<std::string> range_vars_;
};

// ---------------------------------------------------------------- alpha equality

bool aeq(const Formula& a, const Formula& b, Env& ea, Env& eb);

bool aeq(const Term& a, const Term& b, Env& ea, Env& eb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var: {
      int ia = lookup(ea, a.name()), ib = lookup(eb, b.name());
      if (ia < 0 && ib < 0) return a.name() == b.name();
      return ia == ib;
    }
    case TermKind::Meta: return a.meta_id() == b.meta_id();
    case TermKind::App:
      if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!aeq(a.args()[i], b.args()[i], ea, eb)) return false;
      return true;
    case TermKind::Epsilon:
    case TermKind::Comprehension: {
      if (a.binders().size() != b.binders().size()) return false;
      for (std::size_t i = 0; i < a.binders().size(); ++i) {
        ea.push_back(a.binders()[i]);
        eb.push_back(b.binders()[i]);
      }
      bool ok = (!a.is_comprehension() || aeq(a.pattern(), b.pattern(), ea, eb)) && aeq(a.body(), b.body(), ea, eb);
      ea.resize(ea.size() - a.binders().size());
      eb.resize(eb.size() - b.binders().size());
      return ok;
    }
  }
  return false;
}

bool aeq(const Formula& a, const Formula& b, Env& ea, Env& eb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return true;
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!aeq(a.args()[i], b.args()[i], ea, eb)) return false;
      return true;
    case FormulaKind::Not: return aeq(a.operand(), b.operand(), ea, eb);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      ea.push_back(a.binder());
      eb.push_back(b.binder());
      bool ok = aeq(a.body(), b.body(), ea, eb);
      ea.pop_back();
      eb.pop_back();
      return ok;
    }
    default: return aeq(a.lhs(), b.lhs(), ea, eb) && aeq(a.rhs(), b.rhs(), ea, eb);
  }
}

// ---------------------------------------------------------------- unification

class Unifier {
 public:
  explicit Unifier(Substitution s) : s_(std::move(s)) {}

  bool term(const Term& a0, const Term& b0, Env& ea, Env& eb) {
    // A bound metavariable is replaced by its (closed) value, seen from the top level.
    if (a0.is_meta() && s_.metas.count(a0.meta_id())) {
      Term v = s_.metas.at(a0.meta_id());
      Env pad(ea.size(), std::string{});
      return term(v, b0, pad, eb);
    }
    if (b0.is_meta() && s_.metas.count(b0.meta_id())) {
      Term v = s_.metas.at(b0.meta_id());
      Env pad(eb.size(), std::string{});
      return term(a0, v, ea, pad);
    }
    const Term& a = a0;
    const Term& b = b0;
    if (a.is_meta() && b.is_meta() && a.meta_id() == b.meta_id()) return true;
    if (a.is_meta()) return bind(a, b, eb);
    if (b.is_meta()) return bind(b, a, ea);
    return structural(a, b, ea, eb);
  }

  bool formula(const Formula& a, const Formula& b, Env& ea, Env& eb) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case FormulaKind::True:
      case FormulaKind::False: return true;
      case FormulaKind::Atom:
      case FormulaKind::Equal:
        if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
        for (std::size_t i = 0; i < a.args().size(); ++i)
          if (!term(a.args()[i], b.args()[i], ea, eb)) return false;
        return true;
      case FormulaKind::Not: return formula(a.operand(), b.operand(), ea, eb);
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        ea.push_back(a.binder());
        eb.push_back(b.binder());
        bool ok = formula(a.body(), b.body(), ea, eb);
        ea.pop_back();
        eb.pop_back();
        return ok;
      }
      default: return formula(a.lhs(), b.lhs(), ea, eb) && formula(a.rhs(), b.rhs(), ea, eb);
    }
  }

  Substitution result() { return std::move(s_); }

 private:
  bool structural(const Term& a, const Term& b, Env& ea, Env& eb) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case TermKind::Var: {
        int ia = lookup(ea, a.name()), ib = lookup(eb, b.name());
        if (ia < 0 && ib < 0) return a.name() == b.name();
        return ia == ib;
      }
      case TermKind::Meta: return false;
      case TermKind::App:
        if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
        for (std::size_t i = 0; i < a.args().size(); ++i)
          if (!term(a.args()[i], b.args()[i], ea, eb)) return false;
        return true;
      case TermKind::Epsilon:
      case TermKind::Comprehension: {
        if (a.binders().size() != b.binders().size()) return false;
        for (std::size_t i = 0; i < a.binders().size(); ++i) {
          ea.push_back(a.binders()[i]);
          eb.push_back(b.binders()[i]);
        }
        bool ok = (!a.is_comprehension() || term(a.pattern(), b.pattern(), ea, eb)) &&
                  formula(a.body(), b.body(), ea, eb);
        ea.resize(ea.size() - a.binders().size());
        eb.resize(eb.size() - b.binders().size());
        return ok;
      }
    }
    return false;
  }

  bool bind(const Term& m, const Term& t, const Env& env) {
    if (mentions_bound(t, env)) return false;
    Substitution cur;
    cur.metas = s_.metas;
    Term value = substitute(t, cur);
    if (metas_of(value).count(m.meta_id())) return false;
    Substitution one;
    one.metas[m.meta_id()] = value;
    for (auto& [_, v] : s_.metas) v = substitute(v, one);
    s_.metas[m.meta_id()] = value;
    return true;
  }

  Substitution s_;
};

// ---------------------------------------------------------------- matching

class Matcher {
 public:
  Matcher(const std::set<std::string>& params, Substitution s) : params_(params), s_(std::move(s)) {}

  bool term(const Term& p, const Term& t, Env& ep, Env& et) {
    if (p.is_var() && lookup(ep, p.name()) < 0 && params_.count(p.name())) {
      if (mentions_bound(t, et)) return false;
      auto it = s_.vars.find(p.name());
      if (it != s_.vars.end()) return it->second.key() == t.key();
      s_.vars.emplace(p.name(), t);
      return true;
    }
    if (p.kind() != t.kind()) return false;
    switch (p.kind()) {
      case TermKind::Var: {
        int ip = lookup(ep, p.name()), it = lookup(et, t.name());
        if (ip < 0 && it < 0) return p.name() == t.name();
        return ip == it;
      }
      case TermKind::Meta: return p.meta_id() == t.meta_id();
      case TermKind::App:
        if (p.name() != t.name() || p.args().size() != t.args().size()) return false;
        for (std::size_t i = 0; i < p.args().size(); ++i)
          if (!term(p.args()[i], t.args()[i], ep, et)) return false;
        return true;
      case TermKind::Epsilon:
      case TermKind::Comprehension: {
        if (p.binders().size() != t.binders().size()) return false;
        for (std::size_t i = 0; i < p.binders().size(); ++i) {
          ep.push_back(p.binders()[i]);
          et.push_back(t.binders()[i]);
        }
        bool ok = (!p.is_comprehension() || term(p.pattern(), t.pattern(), ep, et)) &&
                  formula(p.body(), t.body(), ep, et);
        ep.resize(ep.size() - p.binders().size());
        et.resize(et.size() - t.binders().size());
        return ok;
      }
    }
    return false;
  }

  bool formula(const Formula& p, const Formula& t, Env& ep, Env& et) {
    if (p.kind() != t.kind()) return false;
    switch (p.kind()) {
      case FormulaKind::True:
      case FormulaKind::False: return true;
      case FormulaKind::Atom:
      case FormulaKind::Equal:
        if (p.name() != t.name() || p.args().size() != t.args().size()) return false;
        for (std::size_t i = 0; i < p.args().size(); ++i)
          if (!term(p.args()[i], t.args()[i], ep, et)) return false;
        return true;
      case FormulaKind::Not: return formula(p.operand(), t.operand(), ep, et);
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        ep.push_back(p.binder());
        et.push_back(t.binder());
        bool ok = formula(p.body(), t.body(), ep, et);
        ep.pop_back();
        et.pop_back();
        return ok;
      }
      default: return formula(p.lhs(), t.lhs(), ep, et) && formula(p.rhs(), t.rhs(), ep, et);
    }
  }

  Substitution result() { return std::move(s_); }

 private:
  const std::set<std::string>& params_;
  Substitution s_;
};

}  // namespace

Term substitute(const Term& t, const Substitution& s) {
  if (s.empty()) return t;
  Substituter sub(s);
  auto vars = s.vars;
  return sub.term(t, vars);
}

Formula substitute(const Formula& f, const Substitution& s) {
  if (s.empty()) return f;
  Substituter sub(s);
  auto vars = s.vars;
  return sub.formula(f, vars);
}

bool alpha_equal(const Term& a, const Term& b) {
  Env ea, eb;
  return aeq(a, b, ea, eb);
}

bool alpha_equal(const Formula& a, const Formula& b) {
  Env ea, eb;
  return aeq(a, b, ea, eb);
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& start) {
  Unifier u(start);
  Env ea, eb;
  if (!u.term(a, b, ea, eb)) return std::nullopt;
  return u.result();
}

std::optional<Substitution> unify(const Formula& a, const Formula& b, const Substitution& start) {
  Unifier u(start);
  Env ea, eb;
  if (!u.formula(a, b, ea, eb)) return std::nullopt;
  return u.result();
}

std::optional<Substitution> match(const Term& pattern, const Term& target, const std::set<std::string>& params,
                                  const Substitution& start) {
  Matcher m(params, start);
  Env ep, et;
  if (!m.term(pattern, target, ep, et)) return std::nullopt;
  return m.result();
}

std::optional<Substitution> match(const Formula& pattern, const Formula& target,
                                  const std::set<std::string>& params, const Substitution& start) {
  Matcher m(params, start);
  Env ep, et;
  if (!m.formula(pattern, target, ep, et)) return std::nullopt;
  return m.result();
}

Term replace_term(const Term& t, const Term& from, const Term& to) {
  if (t.key() == from.key()) return to;
  switch (t.kind()) {
    case TermKind::App: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(replace_term(a, from, to));
      return Term::app(t.name(), std::move(args));
    }
    case TermKind::Epsilon: return Term::epsilon(t.binders()[0], replace_term(t.body(), from, to));
    case TermKind::Comprehension:
      return Term::comprehension(t.binders(), replace_term(t.pattern(), from, to), replace_term(t.body(), from, to));
    default: return t;
  }
}

Formula replace_term(const Formula& f, const Term& from, const Term& to) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return f;
    case FormulaKind::Atom: {
      std::vector<Term> args;
      for (const auto& a : f.args()) args.push_back(replace_term(a, from, to));
      return Formula::atom(f.name(), std::move(args));
    }
    case FormulaKind::Equal: return Formula::equal(replace_term(f.args()[0], from, to), replace_term(f.args()[1], from, to));
    case FormulaKind::Not: return Formula::negate(replace_term(f.operand(), from, to));
    case FormulaKind::And: return Formula::conj(replace_term(f.lhs(), from, to), replace_term(f.rhs(), from, to));
    case FormulaKind::Or: return Formula::disj(replace_term(f.lhs(), from, to), replace_term(f.rhs(), from, to));
    case FormulaKind::Implies: return Formula::implies(replace_term(f.lhs(), from, to), replace_term(f.rhs(), from, to));
    case FormulaKind::Iff: return Formula::iff(replace_term(f.lhs(), from, to), replace_term(f.rhs(), from, to));
    case FormulaKind::Forall: return Formula::forall(f.binder(), replace_term(f.body(), from, to));
    case FormulaKind::Exists: return Formula::exists(f.binder(), replace_term(f.body(), from, to));
  }
  return f;
}

Term make_epsilon(const std::string& x, const Formula& body) { return Term::epsilon(x, body); }

}  // namespace supded
