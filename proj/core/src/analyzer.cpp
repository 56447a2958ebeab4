#include "supded/analyzer.hpp"

#include <algorithm>

#include "supded/unify.hpp"

namespace supded {

const char* to_string(AxiomForm f) {
  switch (f) {
    case AxiomForm::Equiv: return "equiv";
    case AxiomForm::AtomImpAtom: return "atom-imp-atom";
    case AxiomForm::AtomImpAny: return "atom-imp-any";
    case AxiomForm::AnyImpAtom: return "any-imp-atom";
    case AxiomForm::UniversalAtom: return "universal-atom";
    case AxiomForm::NotCompilable: return "not-compilable";
  }
  return "?";
}

const char* to_string(AxiomReason r) {
  switch (r) {
    case AxiomReason::Compiled: return "compiled";
    case AxiomReason::EqualityHead: return "equality-head";
    case AxiomReason::ConclusionConflict: return "conclusion-conflict";
    case AxiomReason::NotCompilable: return "not-compilable";
  }
  return "?";
}

namespace {

struct Stripped {
  std::vector<std::string> vars;
  Formula body;
};

Stripped strip(const Formula& f) {
  Stripped s{{}, f};
  while (s.body.is(FormulaKind::Forall)) {
    s.vars.push_back(s.body.binder());
    s.body = s.body.body();
  }
  return s;
}

bool covers(const Formula& head, const Formula& rest) {
  auto h = free_vars(head);
  for (const auto& v : free_vars(rest))
    if (!h.count(v)) return false;
  return true;
}

Formula close_over(const Formula& f, const std::set<std::string>& keep, bool existential) {
  Formula out = f;
  auto fv = free_vars(f);
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) {
    if (keep.count(*it)) continue;
    out = existential ? Formula::exists(*it, out) : Formula::forall(*it, out);
  }
  return out;
}

Prr rule(const std::string& name, Formula lhs, Formula rhs, bool positive_only) {
  if (literal_atom(lhs).is(FormulaKind::Equal))
    throw EqualityHead(name + ": rewritten atom " + to_string(literal_atom(lhs)) + " is an equality");
  Prr p;
  p.name = name;
  p.params = free_vars(lhs);
  p.rhs = close_over(rhs, p.params, false);
  p.lhs = std::move(lhs);
  p.positive_only = positive_only;
  return p;
}

// Conclusions a Prr produces rules for.
std::vector<Formula> conclusions(const Prr& p) {
  std::vector<Formula> out{p.lhs};
  if (!p.positive_only) out.push_back(complement(p.lhs));
  return out;
}

Formula as_metas(const Formula& f, const std::set<std::string>& params, int base) {
  Substitution s;
  int i = base;
  for (const auto& v : params) s.vars[v] = Term::meta(i++, v);
  return substitute(f, s);
}

}  // namespace

AxiomForm classify_axiom(const Formula& f) {
  Formula b = strip(f).body;
  switch (b.kind()) {
    case FormulaKind::Iff:
      if (b.lhs().is_atomic() || b.rhs().is_atomic()) return AxiomForm::Equiv;
      return AxiomForm::NotCompilable;
    case FormulaKind::Implies:
      if (b.lhs().is_atomic() && b.rhs().is_atomic()) return AxiomForm::AtomImpAtom;
      if (b.lhs().is_atomic()) return AxiomForm::AtomImpAny;
      if (b.rhs().is_atomic()) return AxiomForm::AnyImpAtom;
      return AxiomForm::NotCompilable;
    case FormulaKind::Atom:
    case FormulaKind::Equal: return AxiomForm::UniversalAtom;
    default: return AxiomForm::NotCompilable;
  }
}

std::vector<Prr> rules_for(const std::string& name, const Formula& f, AxiomForm form) {
  Stripped s = strip(f);
  std::set<std::string> distinct(s.vars.begin(), s.vars.end());
  if (distinct.size() != s.vars.size()) return {};
  const Formula& b = s.body;
  switch (form) {
    case AxiomForm::Equiv: {
      // Prefer a non-equality head; variables of the definition must occur in it.
      std::vector<std::pair<Formula, Formula>> heads;
      for (auto [h, d] : {std::pair{b.lhs(), b.rhs()}, std::pair{b.rhs(), b.lhs()}})
        if (h.is_atomic() && covers(h, d)) heads.emplace_back(h, d);
      if (heads.empty()) return {};
      auto pick = std::find_if(heads.begin(), heads.end(), [](const auto& hd) { return !hd.first.is(FormulaKind::Equal); });
      if (pick == heads.end()) pick = heads.begin();
      return {rule(name, pick->first, pick->second, false)};
    }
    case AxiomForm::AtomImpAtom: {
      Formula p = b.lhs(), q = b.rhs();
      // Both directions need every variable bound by their head.
      if (!covers(p, q) || !covers(q, p)) {
        // Extra conclusion variables get closed by rule(); the forward direction always applies.
        return {rule(name, p, q, true)};
      }
      Prr fwd = rule(name, p, q, true);
      Prr back = rule(name + "_contra", Formula::negate(q), Formula::negate(p), true);
      fwd.converse = back.name;
      back.converse = fwd.name;
      return {fwd, back};
    }
    case AxiomForm::AtomImpAny:
      return {rule(name, b.lhs(), b.rhs(), true)};
    case AxiomForm::AnyImpAtom: {
      auto keep = free_vars(b.rhs());
      return {rule(name, Formula::negate(b.rhs()), Formula::negate(close_over(b.lhs(), keep, true)), true)};
    }
    case AxiomForm::UniversalAtom:
      return {rule(name, Formula::negate(b), Formula::bottom(), true)};
    case AxiomForm::NotCompilable: return {};
  }
  return {};
}

std::string AnalysisReport::describe() const {
  std::string o;
  for (const auto& a : outcomes) {
    o += a.name + " " + to_string(a.form) + " " + to_string(a.reason);
    for (const auto& r : a.rules) o += " " + r;
    if (!a.conflict.empty()) o += " (conflicts with " + a.conflict + ")";
    o += "\n";
  }
  o += std::to_string(rules.size()) + " rule(s), " + std::to_string(residual.size()) + " residual axiom(s)\n";
  return o;
}

AnalysisReport analyze_theory(const std::vector<NamedFormula>& axioms, const std::vector<Prr>& accepted) {
  AnalysisReport rep;
  std::vector<std::pair<std::string, Formula>> taken;  // rule name, conclusion with metas
  int base = 0;
  auto take = [&](const Prr& p) {
    for (const auto& c : conclusions(p)) {
      taken.emplace_back(p.name, as_metas(c, p.params, base));
      base += static_cast<int>(p.params.size());
    }
  };
  for (const auto& p : accepted) take(p);

  for (const auto& ax : axioms) {
    AxiomOutcome out;
    out.name = ax.name;
    out.form = classify_axiom(ax.formula);
    std::vector<Prr> rs;
    try {
      rs = rules_for(ax.name, ax.formula, out.form);
      if (rs.empty()) out.reason = AxiomReason::NotCompilable;
    } catch (const EqualityHead&) {
      out.reason = AxiomReason::EqualityHead;
    }
    if (!rs.empty()) {
      for (const auto& p : rs) {
        for (const auto& c : conclusions(p)) {
          Formula mine = as_metas(c, p.params, base);
          auto hit = std::find_if(taken.begin(), taken.end(),
                                  [&](const auto& t) { return unify(mine, t.second).has_value(); });
          if (hit != taken.end() && out.conflict.empty()) out.conflict = hit->first;
        }
        base += 2 * static_cast<int>(p.params.size());
      }
      if (out.conflict.empty()) {
        out.reason = AxiomReason::Compiled;
        for (const auto& p : rs) {
          out.rules.push_back(p.name);
          take(p);
          rep.rules.push_back(p);
        }
      } else {
        out.reason = AxiomReason::ConclusionConflict;
      }
    }
    if (out.reason != AxiomReason::Compiled) rep.residual.push_back(ax);
    rep.outcomes.push_back(std::move(out));
  }
  return rep;
}

}  // namespace supded
