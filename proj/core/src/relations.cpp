#include "supded/relations.hpp"

#include <optional>

#include "supded/unify.hpp"

namespace supded {

namespace {

// Strips exactly `n` universals, replacing the binders by distinct constants.
std::optional<std::pair<Formula, std::vector<Term>>> open_prefix(Formula f, std::size_t n) {
  std::vector<Term> cs;
  while (cs.size() < n) {
    if (!f.is(FormulaKind::Forall)) return std::nullopt;
    Term c = Term::constant("$r" + std::to_string(cs.size()));
    Substitution s;
    s.vars[f.binder()] = c;
    f = substitute(f.body(), s);
    cs.push_back(c);
  }
  if (f.is(FormulaKind::Forall)) return std::nullopt;
  return std::make_pair(f, cs);
}

bool binary_atom(const Formula& f) { return f.is(FormulaKind::Atom) && f.args().size() == 2; }

void learn(const Formula& ax, RelationTable& out) {
  if (ax.is(FormulaKind::And)) {
    learn(ax.lhs(), out);
    learn(ax.rhs(), out);
    return;
  }
  auto mark = [&](const std::string& p) -> PredicateInfo& {
    auto& i = out[p];
    i.symbol = p;
    return i;
  };
  if (auto o = open_prefix(ax, 1)) {
    auto& [f, c] = *o;
    if (binary_atom(f) && f.key() == Formula::atom(f.name(), {c[0], c[0]}).key()) mark(f.name()).reflexive = true;
  }
  if (auto o = open_prefix(ax, 2)) {
    auto& [f, c] = *o;
    if (f.is(FormulaKind::Implies) && binary_atom(f.lhs())) {
      const std::string& p = f.lhs().name();
      Formula want = Formula::implies(Formula::atom(p, {c[0], c[1]}), Formula::atom(p, {c[1], c[0]}));
      if (f.key() == want.key()) mark(p).symmetric = true;
    }
  }
  if (auto o = open_prefix(ax, 3)) {
    auto& [f, c] = *o;
    if (f.is(FormulaKind::Implies)) {
      const Formula& l = f.lhs().is(FormulaKind::And) ? f.lhs().lhs() : f.lhs();
      if (binary_atom(l)) {
        const std::string& p = l.name();
        Formula xy = Formula::atom(p, {c[0], c[1]});
        Formula yz = Formula::atom(p, {c[1], c[2]});
        Formula xz = Formula::atom(p, {c[0], c[2]});
        if (f.key() == Formula::implies(Formula::conj(xy, yz), xz).key() ||
            f.key() == Formula::implies(xy, Formula::implies(yz, xz)).key())
          mark(p).transitive = true;
      }
    }
  }
}

}  // namespace

RelationTable relation_properties(const std::vector<Formula>& axioms) {
  RelationTable out;
  for (const auto& a : axioms) learn(a, out);
  return out;
}

PredicateInfo relation_info(const RelationTable& t, const std::string& symbol) {
  if (symbol == "=") return {symbol, true, true, true};
  auto it = t.find(symbol);
  if (it == t.end()) return {symbol, false, false, false};
  return it->second;
}

}  // namespace supded
