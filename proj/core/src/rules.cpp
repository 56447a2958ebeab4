#include "supded/rules.hpp"

#include <algorithm>
#include <cstdio>

#include "supded/syntax.hpp"

namespace supded {

const char* to_string(RuleClass c) {
  switch (c) {
    case RuleClass::Closure: return "closure";
    case RuleClass::Alpha: return "alpha";
    case RuleClass::Delta: return "delta";
    case RuleClass::Beta: return "beta";
    case RuleClass::Gamma: return "gamma";
  }
  return "?";
}

Prr make_prr(const std::string& name, const std::string& lhs, const std::string& rhs,
             const std::set<std::string>& params) {
  ParseOptions opts;
  opts.pattern_vars = params;
  Prr p;
  p.name = name;
  p.lhs = parse_formula(lhs, opts);
  p.rhs = parse_formula(rhs, opts);
  p.params = free_vars(p.lhs);
  return p;
}

RuleClass SuperRule::klass() const {
  if (branches.empty()) return RuleClass::Closure;
  if (!metas.empty()) return RuleClass::Gamma;
  if (!epsilons.empty()) return RuleClass::Delta;
  if (branches.size() == 1) return RuleClass::Alpha;
  return RuleClass::Beta;
}

Branches instantiate(const SuperRule& r, const Substitution& params, const std::map<int, Term>& meta_values) {
  Substitution s = params;
  s.metas = meta_values;
  Branches out;
  out.reserve(r.branches.size());
  for (const auto& b : r.branches) {
    std::vector<Formula> fs;
    fs.reserve(b.size());
    for (const auto& f : b) fs.push_back(substitute(f, s));
    out.push_back(std::move(fs));
  }
  return out;
}

std::string variant_name(const SuperRule& r, const std::set<int>& fixed) {
  if (fixed.empty()) return r.name;
  std::vector<std::string> names;
  for (int id : fixed) names.push_back(r.metas.at(id).name());
  std::sort(names.begin(), names.end());
  std::string out = r.name + "_";
  for (const auto& n : names) out += n;
  return out;
}

void RuleSet::add(SuperRule r) {
  std::size_t idx = rules.size();
  by_name_[r.name] = idx;
  by_head_[head_key(r.conclusion)].push_back(idx);
  rules.push_back(std::move(r));
}

const SuperRule* RuleSet::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &rules[it->second];
}

std::optional<VariantRef> RuleSet::resolve(const std::string& name) const {
  if (const SuperRule* r = find(name)) return VariantRef{r, {}};
  // Longest rule-name prefix followed by '_' and a concatenation of its meta names.
  for (std::size_t cut = name.size(); cut-- > 1;) {
    if (name[cut] != '_') continue;
    const SuperRule* r = find(name.substr(0, cut));
    if (!r || r->metas.empty()) continue;
    std::string rest = name.substr(cut + 1);
    // Greedy decomposition over sorted names; meta names are unique within a rule.
    std::vector<std::pair<std::string, int>> metas;
    for (std::size_t i = 0; i < r->metas.size(); ++i) metas.emplace_back(r->metas[i].name(), static_cast<int>(i));
    std::sort(metas.begin(), metas.end());
    std::set<int> fixed;
    std::function<bool(std::size_t, std::size_t)> decompose = [&](std::size_t pos, std::size_t from) -> bool {
      if (pos == rest.size()) return !fixed.empty();
      for (std::size_t i = from; i < metas.size(); ++i) {
        const auto& [mn, id] = metas[i];
        if (rest.compare(pos, mn.size(), mn) == 0) {
          fixed.insert(id);
          if (decompose(pos + mn.size(), i + 1)) return true;
          fixed.erase(id);
        }
      }
      return false;
    };
    if (decompose(0, 0) && variant_name(*r, fixed) == name) return VariantRef{r, fixed};
  }
  return std::nullopt;
}

const Schema* RuleSet::schema(const std::string& name) const {
  for (const auto& s : schemas)
    if (s.name == name) return &s;
  return nullptr;
}

std::string head_key(const Formula& literal) {
  bool neg = literal.is(FormulaKind::Not);
  const Formula& a = neg ? literal.operand() : literal;
  if (!a.is_atomic()) return "";
  return std::string(neg ? "-" : "+") + a.name() + "/" + std::to_string(a.args().size());
}

std::optional<RuleSet::Match> RuleSet::first_match(const Formula& f, bool include_equality) const {
  auto it = by_head_.find(head_key(f));
  if (it == by_head_.end()) return std::nullopt;
  for (std::size_t idx : it->second) {
    const SuperRule& r = rules[idx];
    if (!include_equality && r.equality) continue;
    if (auto s = match(r.conclusion, f, r.params)) return Match{&r, std::move(*s)};
  }
  return std::nullopt;
}

std::optional<std::pair<const Schema*, Branches>> RuleSet::first_schema(const Formula& f) const {
  for (const auto& s : schemas)
    if (auto b = s.apply(f)) return std::make_pair(&s, std::move(*b));
  return std::nullopt;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string RuleSet::describe() const {
  std::string out;
  for (const auto& r : rules) {
    out += r.name;
    out += " [";
    out += to_string(r.klass());
    out += "]: ";
    out += to_string(r.conclusion);
    out += " ==> ";
    if (r.branches.empty()) out += "$closed";
    for (std::size_t i = 0; i < r.branches.size(); ++i) {
      if (i) out += " | ";
      for (std::size_t j = 0; j < r.branches[i].size(); ++j) {
        if (j) out += ", ";
        out += to_string(r.branches[i][j]);
      }
      if (r.branches[i].empty()) out += "$true";
    }
    out += '\n';
  }
  for (const auto& s : schemas) out += s.name + " [schema]\n";
  return out;
}

std::string RuleSet::fingerprint() const { return id + ":" + hex64(fnv1a(describe())).substr(0, 12); }

// ---------------------------------------------------------------- schemas

namespace {

const Formula* membership(const Formula& f, bool negative) {
  const Formula* a = &f;
  if (negative) {
    if (!f.is(FormulaKind::Not)) return nullptr;
    a = &f.operand();
  }
  if (!a->is(FormulaKind::Atom) || a->name() != "in" || a->args().size() != 2) return nullptr;
  return a;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string n = base;
  while (avoid.count(n)) n += "'";
  return n;
}

}  // namespace

Schema comprehension_schema(bool negative) {
  Schema s;
  s.name = negative ? "not_compr" : "compr";
  s.klass = RuleClass::Alpha;
  s.apply = [negative](const Formula& f) -> std::optional<Branches> {
    const Formula* a = membership(f, negative);
    if (!a || !a->args()[1].is_comprehension()) return std::nullopt;
    const Term& elem = a->args()[0];
    const Term& set = a->args()[1];
    std::set<std::string> binders(set.binders().begin(), set.binders().end());
    Formula result;
    auto sigma = match(set.pattern(), elem, binders);
    if (sigma && sigma->vars.size() == binders.size()) {
      result = substitute(set.body(), *sigma);
    } else {
      // Element is not pair-shaped like the pattern: exists u.. (elem = pat & phi).
      std::set<std::string> avoid = free_vars(elem);
      for (const auto& v : free_vars(set.body())) avoid.insert(v);
      for (const auto& v : free_vars(set.pattern())) avoid.insert(v);
      Substitution ren;
      std::vector<std::string> names;
      for (const auto& b : set.binders()) {
        std::string n = avoid.count(b) ? fresh_name(b, avoid) : b;
        avoid.insert(n);
        names.push_back(n);
        if (n != b) ren.vars[b] = Term::var(n);
      }
      // Renaming bound names before rebuilding binders keeps the body's meaning.
      Formula body = Formula::conj(Formula::equal(elem, substitute(set.pattern(), ren)), substitute(set.body(), ren));
      for (std::size_t i = names.size(); i-- > 0;) body = Formula::exists(names[i], body);
      result = body;
    }
    if (negative) result = Formula::negate(result);
    return Branches{{result}};
  };
  return s;
}

Schema enum_schema(bool negative) {
  Schema s;
  s.name = negative ? "not_enum" : "enum";
  s.klass = negative ? RuleClass::Alpha : RuleClass::Beta;
  s.apply = [negative](const Formula& f) -> std::optional<Branches> {
    const Formula* a = membership(f, negative);
    if (!a || !a->args()[1].is_app() || a->args()[1].name() != "enum") return std::nullopt;
    const Term& elem = a->args()[0];
    const auto& items = a->args()[1].args();
    if (negative) {
      if (items.empty()) return std::nullopt;
      std::vector<Formula> fs;
      for (const auto& e : items) fs.push_back(Formula::negate(Formula::equal(elem, e)));
      return Branches{fs};
    }
    Branches out;
    for (const auto& e : items) out.push_back({Formula::equal(elem, e)});
    return out;
  };
  return s;
}

std::vector<Schema> standard_schemas() {
  return {comprehension_schema(false), comprehension_schema(true), enum_schema(false), enum_schema(true)};
}

}  // namespace supded
