#include "supded/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_set>

namespace supded {

namespace {

std::string upper_name(const std::string& binder) {
  std::string n;
  for (char c : binder)
    if (std::isalnum(static_cast<unsigned char>(c))) n += c;
  if (n.empty()) n = "M";
  n[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(n[0])));
  return n;
}

bool is_trivial_eq(const Formula& f) { return f.is(FormulaKind::Equal) && f.args()[0].key() == f.args()[1].key(); }

bool is_neq(const Formula& f) { return f.is(FormulaKind::Not) && f.operand().is(FormulaKind::Equal); }

bool branch_closed(const std::vector<Formula>& b) {
  std::unordered_set<std::string> keys;
  for (const auto& f : b) keys.insert(f.key());
  for (const auto& f : b) {
    if (f.is(FormulaKind::False)) return true;
    if (f.is(FormulaKind::Not)) {
      const Formula& a = f.operand();
      if (a.is(FormulaKind::True)) return true;
      if (keys.count(a.key())) return true;
      if (a.is(FormulaKind::Equal)) {
        if (a.args()[0].key() == a.args()[1].key()) return true;
        if (keys.count(Formula::equal(a.args()[1], a.args()[0]).key())) return true;
      }
    }
  }
  return false;
}

class Saturator {
 public:
  Saturator(const RuleSet* ext, int& next_meta, int budget, std::string name)
      : ext_(ext), schemas_(standard_schemas()), next_meta_(next_meta), budget_(budget), name_(std::move(name)) {}

  void run(std::vector<Formula> branch, Branches& out) {
    if (++steps_ > budget_) throw CyclicDefinition(name_);
    if (branch_closed(branch)) return;
    for (std::size_t i = 0; i < branch.size(); ++i) {
      auto children = expand(branch[i]);
      if (!children) continue;
      for (const auto& child : *children) {
        std::vector<Formula> nb;
        std::unordered_set<std::string> seen;
        auto push = [&](const Formula& f) {
          if (seen.insert(f.key()).second) nb.push_back(f);
        };
        for (std::size_t j = 0; j < i; ++j) push(branch[j]);
        for (const auto& f : child) push(f);
        for (std::size_t j = i + 1; j < branch.size(); ++j) push(branch[j]);
        run(std::move(nb), out);
      }
      return;
    }
    out.push_back(std::move(branch));
  }

 private:
  // The same gamma formula copied into sibling branches gets the same metavariable.
  Term gamma_meta(const Formula& f, const std::string& binder) {
    auto it = gamma_memo_.find(f.key());
    if (it != gamma_memo_.end()) return it->second;
    Term m = Term::meta(next_meta_++, upper_name(binder));
    gamma_memo_.emplace(f.key(), m);
    return m;
  }

  std::optional<Branches> expand(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::True: return Branches{{}};
      case FormulaKind::False: return Branches{};
      case FormulaKind::Equal:
        if (is_trivial_eq(f)) return Branches{{}};
        return std::nullopt;
      case FormulaKind::Atom: return literal(f);
      case FormulaKind::And: return Branches{{f.lhs(), f.rhs()}};
      case FormulaKind::Or: return Branches{{f.lhs()}, {f.rhs()}};
      case FormulaKind::Implies: return Branches{{Formula::negate(f.lhs())}, {f.rhs()}};
      case FormulaKind::Iff:
        return Branches{{Formula::negate(f.lhs()), Formula::negate(f.rhs())}, {f.lhs(), f.rhs()}};
      case FormulaKind::Exists: {
        Term e = make_epsilon(f.binder(), f.body());
        return Branches{{instantiate_binder(f, e)}};
      }
      case FormulaKind::Forall: return Branches{{instantiate_binder(f, gamma_meta(f, f.binder()))}};
      case FormulaKind::Not: break;
    }
    const Formula& a = f.operand();
    switch (a.kind()) {
      case FormulaKind::True: return Branches{};
      case FormulaKind::False: return Branches{{}};
      case FormulaKind::Not: return Branches{{a.operand()}};
      case FormulaKind::Or: return Branches{{Formula::negate(a.lhs()), Formula::negate(a.rhs())}};
      case FormulaKind::Implies: return Branches{{a.lhs(), Formula::negate(a.rhs())}};
      case FormulaKind::And: return Branches{{Formula::negate(a.lhs())}, {Formula::negate(a.rhs())}};
      case FormulaKind::Iff:
        return Branches{{Formula::negate(a.lhs()), a.rhs()}, {a.lhs(), Formula::negate(a.rhs())}};
      case FormulaKind::Forall: {
        Term e = make_epsilon(a.binder(), Formula::negate(a.body()));
        return Branches{{Formula::negate(instantiate_binder(a, e))}};
      }
      case FormulaKind::Exists:
        return Branches{{Formula::negate(instantiate_binder(a, gamma_meta(f, a.binder())))}};
      case FormulaKind::Equal:
        if (is_trivial_eq(a)) return Branches{};
        return std::nullopt;
      case FormulaKind::Atom: return literal(f);
    }
    return std::nullopt;
  }

  static Formula instantiate_binder(const Formula& q, const Term& t) {
    Substitution s;
    s.vars[q.binder()] = t;
    return substitute(q.body(), s);
  }

  std::optional<Branches> literal(const Formula& f) {
    for (const auto& s : schemas_)
      if (auto b = s.apply(f)) return b;
    if (!ext_) return std::nullopt;
    auto m = ext_->first_match(f, /*include_equality=*/false);
    if (!m) return std::nullopt;
    auto memo = rule_memo_.find(f.key());
    if (memo == rule_memo_.end()) {
      std::map<int, Term> fresh;
      for (std::size_t i = 0; i < m->rule->metas.size(); ++i)
        fresh[static_cast<int>(i)] = Term::meta(next_meta_++, m->rule->metas[i].name());
      memo = rule_memo_.emplace(f.key(), std::move(fresh)).first;
    }
    const auto& metas = memo->second;
    return instantiate(*m->rule, m->params, metas);
  }

  const RuleSet* ext_;
  std::vector<Schema> schemas_;
  int& next_meta_;
  std::unordered_map<std::string, Term> gamma_memo_;
  std::unordered_map<std::string, std::map<int, Term>> rule_memo_;
  int budget_;
  std::string name_;
  int steps_ = 0;
};

// ---------------------------------------------------------------- simplification

std::string branch_signature(const std::vector<Formula>& b) {
  std::vector<std::string> ks;
  for (const auto& f : b) ks.push_back(f.key());
  std::sort(ks.begin(), ks.end());
  std::string s;
  for (const auto& k : ks) s += k + "\n";
  return s;
}

std::set<int> branch_metas(const std::vector<Formula>& b) {
  std::set<int> out;
  for (const auto& f : b)
    for (int m : metas_of(f)) out.insert(m);
  return out;
}

std::vector<Formula> dedupe(const std::vector<Formula>& b) {
  std::vector<Formula> out;
  std::unordered_set<std::string> seen;
  for (const auto& f : b)
    if (!is_trivial_eq(f) && seen.insert(f.key()).second) out.push_back(f);
  return out;
}

Branches substitute_all(const Branches& bs, const Substitution& s) {
  Branches out;
  for (const auto& b : bs) {
    std::vector<Formula> nb;
    for (const auto& f : b) nb.push_back(substitute(f, s));
    out.push_back(dedupe(nb));
  }
  return out;
}

// An equality whose one side is an epsilon term lets the witness be replaced.
bool eliminate_epsilon_equalities(Branches& bs) {
  for (auto& b : bs) {
    for (const auto& f : b) {
      if (!f.is(FormulaKind::Equal)) continue;
      for (int side = 0; side < 2; ++side) {
        const Term& e = f.args()[side];
        const Term& t = f.args()[1 - side];
        if (!e.is_epsilon() || occurs_in(e, t)) continue;
        std::vector<Formula> nb;
        for (const auto& g : b) nb.push_back(replace_term(g, e, t));
        b = dedupe(nb);
        return true;
      }
    }
  }
  return false;
}

// A branch reduced to M != t is closed by specializing M := t.
bool specialize_single_disequalities(Branches& bs) {
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (bs[i].size() != 1 || !is_neq(bs[i][0])) continue;
    const auto& eq = bs[i][0].operand();
    for (int side = 0; side < 2; ++side) {
      const Term& m = eq.args()[side];
      const Term& t = eq.args()[1 - side];
      if (!m.is_meta() || metas_of(t).count(m.meta_id())) continue;
      Substitution s;
      s.metas[m.meta_id()] = t;
      Branches rest;
      for (std::size_t j = 0; j < bs.size(); ++j)
        if (j != i) rest.push_back(bs[j]);
      bs = substitute_all(rest, s);
      return true;
    }
  }
  return false;
}

// Matches the literals of `from` one-to-one onto `to`, binding only `vars`.
bool match_branch(const std::vector<Formula>& from, const std::vector<Formula>& to, const std::set<std::string>& vars,
                  std::size_t i, std::vector<bool>& used, const Substitution& s) {
  if (i == from.size()) return true;
  for (std::size_t j = 0; j < to.size(); ++j) {
    if (used[j]) continue;
    auto m = match(from[i], to[j], vars, s);
    if (!m) continue;
    used[j] = true;
    if (match_branch(from, to, vars, i + 1, used, *m)) return true;
    used[j] = false;
  }
  return false;
}

// A branch whose private metavariables can be chosen to reproduce another
// branch is redundant.
bool merge_specializable_branches(Branches& bs) {
  for (std::size_t i = 0; i < bs.size(); ++i) {
    std::set<int> mine = branch_metas(bs[i]);
    if (mine.empty()) continue;
    std::set<int> priv;
    for (int m : mine) {
      bool elsewhere = false;
      for (std::size_t j = 0; j < bs.size() && !elsewhere; ++j)
        if (j != i && branch_metas(bs[j]).count(m)) elsewhere = true;
      if (!elsewhere) priv.insert(m);
    }
    if (priv.empty()) continue;
    Substitution as_vars;
    std::set<std::string> vars;
    for (int m : priv) {
      std::string v = "_m" + std::to_string(m);
      as_vars.metas[m] = Term::var(v);
      vars.insert(v);
    }
    std::vector<Formula> pattern;
    for (const auto& f : bs[i]) pattern.push_back(substitute(f, as_vars));
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (j == i || bs[j].size() != pattern.size()) continue;
      std::vector<bool> used(bs[j].size(), false);
      if (match_branch(pattern, bs[j], vars, 0, used, {})) {
        bs.erase(bs.begin() + static_cast<long>(i));
        return true;
      }
    }
  }
  return false;
}

// L(eps) is dropped when eps is private to it and L(t) is already present.
bool drop_subsumed_witnesses(Branches& bs) {
  const Term hole = Term::var("_hole");
  const std::set<std::string> vars{"_hole"};
  for (auto& b : bs) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (const auto& e : epsilons_of(b[i])) {
        bool private_eps = true;
        for (std::size_t j = 0; j < b.size() && private_eps; ++j)
          if (j != i && occurs_in(e, b[j])) private_eps = false;
        if (!private_eps) continue;
        Formula pat = replace_term(b[i], e, hole);
        for (std::size_t j = 0; j < b.size(); ++j) {
          if (j == i) continue;
          if (match(pat, b[j], vars)) {
            b.erase(b.begin() + static_cast<long>(i));
            return true;
          }
        }
      }
    }
  }
  return false;
}

bool dedupe_branches(Branches& bs) {
  bool changed = false;
  Branches out;
  std::unordered_set<std::string> seen;
  for (auto& b : bs) {
    auto nb = dedupe(b);
    if (nb.size() != b.size()) changed = true;
    if (branch_closed(nb)) {
      changed = true;
      continue;
    }
    if (seen.insert(branch_signature(nb)).second)
      out.push_back(std::move(nb));
    else
      changed = true;
  }
  bs = std::move(out);
  return changed;
}

}  // namespace

Branches saturate(const Formula& f, const RuleSet* extension, int& next_meta, int step_budget,
                  const std::string& rule_name) {
  Saturator s(extension, next_meta, step_budget, rule_name);
  Branches out;
  s.run({f}, out);
  return out;
}

Branches simplify_branches(Branches bs) {
  dedupe_branches(bs);
  for (int guard = 0; guard < 1000; ++guard) {
    bool changed = eliminate_epsilon_equalities(bs) || specialize_single_disequalities(bs) ||
                   merge_specializable_branches(bs) || drop_subsumed_witnesses(bs);
    changed = dedupe_branches(bs) || changed;
    if (!changed) break;
  }
  return bs;
}

SuperRule finish_rule(std::string name, const Prr& p, bool negative, Branches branches) {
  SuperRule r;
  r.name = std::move(name);
  r.source = p.name;
  r.negative = negative;
  r.equality = p.equality;
  r.conclusion = negative ? complement(p.lhs) : p.lhs;
  r.params = p.params;
  r.converse = p.converse;

  std::set<int> ids;
  for (const auto& b : branches)
    for (int m : branch_metas(b)) ids.insert(m);
  std::map<int, std::string> names;
  for (const auto& b : branches)
    for (const auto& f : b) {
      std::function<void(const Term&)> walk_t;
      std::function<void(const Formula&)> walk_f = [&](const Formula& g) {
        for (const auto& a : g.args()) walk_t(a);
        if (g.is(FormulaKind::Not) || g.is_quantifier()) walk_f(g.operand());
        if (g.is_binary()) {
          walk_f(g.lhs());
          walk_f(g.rhs());
        }
      };
      walk_t = [&](const Term& t) {
        if (t.is_meta()) names.emplace(t.meta_id(), t.name());
        for (const auto& a : t.args()) walk_t(a);
        if (t.is_epsilon() || t.is_comprehension()) walk_f(t.body());
        if (t.is_comprehension()) walk_t(t.pattern());
      };
      walk_f(f);
    }
  Substitution renum;
  std::set<std::string> used;
  int local = 0;
  for (int id : ids) {
    std::string base = names.count(id) ? names[id] : "M";
    std::string n = base;
    for (int k = 1; used.count(n); ++k) n = base + std::to_string(k);
    used.insert(n);
    Term m = Term::meta(local++, n);
    renum.metas[id] = m;
    r.metas.push_back(m);
  }
  r.branches = substitute_all(branches, renum);
  std::unordered_set<std::string> seen;
  for (const auto& b : r.branches)
    for (const auto& f : b)
      for (const auto& e : epsilons_of(f))
        if (seen.insert(e.key()).second) r.epsilons.push_back(e);
  return r;
}

CompiledPair compile(const Prr& p, const RuleSet* extension, const CompileOptions& opts) {
  int next_meta = 1000;
  auto run = [&](const Formula& f, const std::string& name) {
    Branches bs = saturate(f, opts.extension ? extension : nullptr, next_meta, opts.step_budget, name);
    return opts.simplify ? simplify_branches(std::move(bs)) : bs;
  };
  CompiledPair out;
  out.positive = finish_rule(p.name, p, false, run(p.rhs, p.name));
  if (!p.positive_only) {
    std::string neg = "not_" + p.name;
    out.negative = finish_rule(neg, p, true, run(Formula::negate(p.rhs), neg));
  }
  return out;
}

RuleSet compile_with_extension(const std::vector<Prr>& prrs, const CompileOptions& opts) {
  RuleSet result;
  result.id = "super";
  result.schemas = standard_schemas();
  RuleSet ext;
  for (const auto& p : prrs) {
    CompiledPair c = compile(p, &ext, opts);
    if (!p.equality) {
      ext.add(c.positive);
      if (c.negative) ext.add(*c.negative);
    }
    result.add(std::move(c.positive));
    if (c.negative) result.add(std::move(*c.negative));
  }
  return result;
}

RuleSet unfold_rules(const std::vector<Prr>& prrs) {
  RuleSet result;
  result.id = "unfold";
  result.schemas = standard_schemas();
  for (const auto& p : prrs) {
    SuperRule pos;
    pos.name = "unfold_" + p.name;
    pos.source = p.name;
    pos.equality = p.equality;
    pos.conclusion = p.lhs;
    pos.params = p.params;
    pos.branches = {{p.rhs}};
    result.add(pos);
    if (p.positive_only) continue;
    SuperRule neg = pos;
    neg.name = "unfold_not_" + p.name;
    neg.negative = true;
    neg.conclusion = complement(p.lhs);
    neg.branches = {{Formula::negate(p.rhs)}};
    result.add(neg);
  }
  return result;
}

std::vector<std::set<int>> variants(const SuperRule& r) {
  std::vector<std::set<int>> out;
  int k = static_cast<int>(r.metas.size());
  for (int mask = 1; mask < (1 << k); ++mask) {
    std::set<int> s;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) s.insert(i);
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

}  // namespace supded
