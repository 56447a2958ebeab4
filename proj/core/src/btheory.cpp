#include "supded/btheory.hpp"

#include <algorithm>
#include <mutex>

#include "supded/compiler.hpp"
#include "supded/syntax.hpp"

namespace supded {

namespace {

Prr prr(const std::string& name, const std::string& lhs, const std::string& rhs, std::set<std::string> params) {
  return make_prr(name, lhs, rhs, params);
}

struct Relation {
  std::string name;
  std::string term;
  std::set<std::string> params;
  std::string element = "pair(y,z)";  // shape of the members the construct's rule expects
  std::string binders = "y,z";
};

const std::vector<Relation>& relation_constructs() {
  static const std::vector<Relation> rels = {
      {"inv", "inv(a)", {"a"}},          {"comp", "comp(a,b)", {"a", "b"}}, {"circ", "circ(a,b)", {"a", "b"}},
      {"id", "id(a)", {"a"}},            {"dres", "dres(a,b)", {"a", "b"}}, {"rres", "rres(a,b)", {"a", "b"}},
      {"dsub", "dsub(a,b)", {"a", "b"}}, {"rsub", "rsub(a,b)", {"a", "b"}}, {"ovr", "ovr(a,b)", {"a", "b"}},
      {"dprod", "dprod(a,b)", {"a", "b"}, "pair(y,pair(z,w))", "y,z,w"},
      {"prj1", "prj1(a,b)", {"a", "b"}, "pair(pair(y,z),w)", "y,z,w"},
      {"prj2", "prj2(a,b)", {"a", "b"}, "pair(pair(y,z),w)", "y,z,w"},
      {"par", "par(a,b)", {"a", "b"}, "pair(pair(y,z),pair(w,v))", "y,z,w,v"},
  };
  return rels;
}

Prr star_rule(const std::string& name, const std::string& set, std::set<std::string> params,
              const std::string& element = "pair(y,z)", const std::string& binders = "y,z") {
  params.insert("x");
  return prr(name + "_star", "in(x," + set + ")",
             "?[" + binders + "]: (x = " + element + " & in(" + element + "," + set + "))", params);
}

}  // namespace

std::vector<Prr> b_rewrite_rules() {
  std::vector<Prr> out;
  out.push_back(prr("prod", "in(pair(x,y),prod(a,b))", "in(x,a) & in(y,b)", {"x", "y", "a", "b"}));
  Prr inj = prr("pair_inj", "pair(x,y) = pair(z,w)", "x = z & y = w", {"x", "y", "z", "w"});
  inj.positive_only = true;
  out.push_back(inj);
  out.push_back(prr("pow", "in(a,pow(b))", "![x]: (in(x,a) => in(x,b))", {"a", "b"}));
  Prr eq = prr("eq_ext", "a = b", "![x]: (in(x,a) <=> in(x,b))", {"a", "b"});
  eq.equality = true;
  out.push_back(eq);
  out.push_back(prr("subseteq", "subseteq(a,b)", "in(a,pow(b))", {"a", "b"}));
  out.push_back(prr("subset", "subset(a,b)", "subseteq(a,b) & a != b", {"a", "b"}));
  out.push_back(prr("union", "in(x,union(a,b))", "in(x, {[e]: e | (in(e,a) | in(e,b))})", {"x", "a", "b"}));
  out.push_back(prr("inter", "in(x,inter(a,b))", "in(x, {[e]: e | (in(e,a) & in(e,b))})", {"x", "a", "b"}));
  out.push_back(prr("diff", "in(x,diff(a,b))", "in(x, {[e]: e | (in(e,a) & ~in(e,b))})", {"x", "a", "b"}));
  out.push_back(prr("empty", "in(x,empty)", "in(x,diff(big,big))", {"x"}));
  out.push_back(prr("rel", "in(x,rel(a,b))", "in(x,pow(prod(a,b)))", {"x", "a", "b"}));
  out.push_back(prr("inv", "in(pair(x,y),inv(a))", "in(pair(x,y), {[u,v]: pair(v,u) | in(pair(u,v),a)})",
                    {"x", "y", "a"}));
  out.push_back(prr("dom", "in(x,dom(a))", "in(x, {[u]: u | ?[y]: in(pair(u,y),a)})", {"x", "a"}));
  out.push_back(prr("ran", "in(y,ran(a))", "in(y,dom(inv(a)))", {"y", "a"}));
  out.push_back(prr("comp", "in(pair(x,z),comp(a,b))",
                    "in(pair(x,z), {[u,w]: pair(u,w) | ?[y]: (in(pair(u,y),a) & in(pair(y,w),b))})",
                    {"x", "z", "a", "b"}));
  out.push_back(prr("circ", "in(pair(x,y),circ(a,b))", "in(pair(x,y),comp(b,a))", {"x", "y", "a", "b"}));
  out.push_back(prr("id", "in(pair(x,y),id(a))",
                    "in(pair(x,y), {[u,v]: pair(u,v) | (in(pair(u,v),prod(a,a)) & u = v)})", {"x", "y", "a"}));
  out.push_back(prr("dres", "in(pair(x,y),dres(a,b))", "in(pair(x,y),comp(id(a),b))", {"x", "y", "a", "b"}));
  out.push_back(prr("rres", "in(pair(x,y),rres(a,b))", "in(pair(x,y),comp(a,id(b)))", {"x", "y", "a", "b"}));
  out.push_back(prr("dsub", "in(pair(x,y),dsub(a,b))", "in(pair(x,y),dres(diff(dom(b),a),b))",
                    {"x", "y", "a", "b"}));
  out.push_back(prr("rsub", "in(pair(x,y),rsub(a,b))", "in(pair(x,y),rres(a,diff(ran(a),b)))",
                    {"x", "y", "a", "b"}));
  out.push_back(prr("image", "in(y,image(a,b))", "in(y,ran(dres(b,a)))", {"y", "a", "b"}));
  out.push_back(prr("ovr", "in(pair(x,y),ovr(a,b))", "in(pair(x,y),union(dsub(dom(b),a),b))",
                    {"x", "y", "a", "b"}));
  out.push_back(prr("dprod", "in(pair(x,pair(y,z)),dprod(a,b))",
                    "in(pair(x,pair(y,z)), {[u,v,w]: pair(u,pair(v,w)) | (in(pair(u,v),a) & in(pair(u,w),b))})",
                    {"x", "y", "z", "a", "b"}));
  out.push_back(prr("prj1", "in(pair(pair(x,y),z),prj1(a,b))", "in(pair(pair(x,y),z),inv(dprod(id(a),prod(a,b))))",
                    {"x", "y", "z", "a", "b"}));
  out.push_back(prr("prj2", "in(pair(pair(x,y),z),prj2(a,b))", "in(pair(pair(x,y),z),inv(dprod(prod(b,a),id(b))))",
                    {"x", "y", "z", "a", "b"}));
  out.push_back(prr("par", "in(pair(pair(x,y),pair(z,t)),par(a,b))",
                    "in(pair(pair(x,y),pair(z,t)), {[u1,u2,u3,u4]: pair(pair(u1,u2),pair(u3,u4)) | "
                    "(in(pair(u1,u3),a) & in(pair(u2,u4),b))})",
                    {"x", "y", "z", "t", "a", "b"}));
  out.push_back(prr("pfun", "in(a,pfun(b,c))",
                    "in(a, {[f]: f | (in(f,rel(b,c)) & ![x,y,z]: ((in(pair(x,y),f) & in(pair(x,z),f)) => y = z))})",
                    {"a", "b", "c"}));
  return out;
}

std::vector<Prr> star_rules() {
  std::vector<Prr> out;
  out.push_back(star_rule("prod", "prod(a,b)", {"a", "b"}));
  for (const auto& r : relation_constructs()) out.push_back(star_rule(r.name, r.term, r.params, r.element, r.binders));
  return out;
}

std::vector<Prr> b_pack() {
  auto base = b_rewrite_rules();
  auto stars = star_rules();
  std::vector<Prr> out;
  for (auto& p : base) {
    std::string name = p.name;
    // The product star rule is needed by rel and pfun, so it follows rel's dependencies.
    if (name == "rel")
      for (const auto& s : stars)
        if (s.name == "prod_star") out.push_back(s);
    out.push_back(std::move(p));
    for (const auto& s : stars)
      if (s.name == name + "_star" && name != "prod") out.push_back(s);
  }
  return out;
}

RuleSet build_b_rules(BMode mode) {
  RuleSet rs = mode == BMode::Super ? compile_with_extension(b_pack()) : unfold_rules(b_pack());
  if (mode == BMode::Super) apply_golden_order(rs);
  rs.id = mode == BMode::Super ? "b-set:super" : "b-set:unfold";
  return rs;
}

const RuleSet& b_rules(BMode mode) {
  static std::once_flag once_super, once_unfold;
  static RuleSet super_rules, unfold;
  if (mode == BMode::Super) {
    std::call_once(once_super, [] { super_rules = build_b_rules(BMode::Super); });
    return super_rules;
  }
  std::call_once(once_unfold, [] { unfold = build_b_rules(BMode::Unfold); });
  return unfold;
}

// ---------------------------------------------------------------- golden table

const std::vector<GoldenRule>& golden_table() {
  static const std::vector<GoldenRule> table = {
      // axioms
      {"prod", {"in(x,a); in(y,b)"}, 0, 0},
      {"not_prod", {"~in(x,a)", "~in(y,b)"}, 0, 0},
      {"pow", {"~in(X,a)", "in(X,b)"}, 0, 1},
      {"not_pow", {"in(eps_x,a); ~in(eps_x,b)"}, 1, 0},
      {"eq_ext", {"~in(X,a); ~in(X,b)", "in(X,a); in(X,b)"}, 0, 1},
      {"not_eq_ext", {"~in(eps_x,a); in(eps_x,b)", "in(eps_x,a); ~in(eps_x,b)"}, 1, 0},
      // derived constructs
      {"subseteq", {"~in(X,a)", "in(X,b)"}, 0, 1},
      {"not_subseteq", {"in(eps_x,a); ~in(eps_x,b)"}, 1, 0},
      {"union", {"in(x,a)", "in(x,b)"}, 0, 0},
      {"not_union", {"~in(x,a); ~in(x,b)"}, 0, 0},
      {"inter", {"in(x,a); in(x,b)"}, 0, 0},
      {"not_inter", {"~in(x,a)", "~in(x,b)"}, 0, 0},
      {"diff", {"in(x,a); ~in(x,b)"}, 0, 0},
      {"not_diff", {"~in(x,a)", "in(x,b)"}, 0, 0},
      {"empty", {}, 0, 0},
      // binary relations, first series
      {"inv", {"in(pair(y,x),a)"}, 0, 0},
      {"not_inv", {"~in(pair(y,x),a)"}, 0, 0},
      {"dom", {"in(pair(x,eps_y),a)"}, 1, 0},
      {"not_dom", {"~in(pair(x,Y),a)"}, 0, 1},
      {"ran", {"in(pair(eps_x,y),a)"}, 1, 0},
      {"not_ran", {"~in(pair(X,y),a)"}, 0, 1},
      {"comp", {"in(pair(x,eps_y),a); in(pair(eps_y,z),b)"}, 1, 0},
      {"not_comp", {"~in(pair(x,Y),a)", "~in(pair(Y,z),b)"}, 0, 1},
      {"circ", {"in(pair(x,eps_y),b); in(pair(eps_y,y),a)"}, 1, 0},
      {"not_circ", {"~in(pair(x,Y),b)", "~in(pair(Y,y),a)"}, 0, 1},
      {"id", {"x = y; in(x,a); in(y,a)"}, 0, 0},
      {"not_id", {"x != y", "~in(x,a)", "~in(y,a)"}, 0, 0},
      {"dres", {"in(pair(x,y),b); in(x,a)"}, 0, 0},
      {"not_dres", {"~in(pair(x,y),b)", "~in(x,a)"}, 0, 0},
      {"dsub", {"in(pair(x,y),b); ~in(x,a)"}, 0, 0},
      {"not_dsub", {"~in(pair(x,y),b)", "in(x,a)"}, 0, 0},
      {"rres", {"in(pair(x,y),a); in(y,b)"}, 0, 0},
      {"not_rres", {"~in(pair(x,y),a)", "~in(y,b)"}, 0, 0},
      {"rsub", {"in(pair(x,y),a); ~in(y,b)"}, 0, 0},
      {"not_rsub", {"~in(pair(x,y),a)", "in(y,b)"}, 0, 0},
      // binary relations, second series
      {"image", {"in(eps_x,b); in(pair(eps_x,y),a)"}, 1, 0},
      {"not_image", {"~in(X,b)", "~in(pair(X,y),a)"}, 0, 1},
      {"ovr", {"in(pair(x,y),a); ~in(pair(x,Y),b)", "in(pair(x,y),b)"}, 0, 1},
      {"not_ovr", {"~in(pair(x,y),a); ~in(pair(x,y),b)", "in(pair(x,eps_y),b); ~in(pair(x,y),b)"}, 1, 0},
      {"dprod", {"in(pair(x,y),a); in(pair(x,z),b)"}, 0, 0},
      {"not_dprod", {"~in(pair(x,y),a)", "~in(pair(x,z),b)"}, 0, 0},
      {"prj1", {"in(x,a); in(y,b); in(z,a); z = x"}, 0, 0},
      {"not_prj1", {"~in(x,a)", "~in(y,b)", "~in(z,a)", "z != x"}, 0, 0},
      {"prj2", {"in(x,a); in(y,b); in(z,b); z = y"}, 0, 0},
      {"not_prj2", {"~in(x,a)", "~in(y,b)", "~in(z,b)", "z != y"}, 0, 0},
      {"par", {"in(pair(x,z),a); in(pair(y,t),b)"}, 0, 0},
      {"not_par", {"~in(pair(x,z),a)", "~in(pair(y,t),b)"}, 0, 0},
      // functions
      {"pfun",
       {"~in(T,a); ~in(pair(X,Y),a)", "~in(T,a); ~in(pair(X,Z),a)", "~in(T,a); Y = Z",
        "T = pair(eps_x,eps_y); in(eps_x,b); in(eps_y,c); ~in(pair(X,Y),a)",
        "T = pair(eps_x,eps_y); in(eps_x,b); in(eps_y,c); ~in(pair(X,Z),a)",
        "T = pair(eps_x,eps_y); in(eps_x,b); in(eps_y,c); Y = Z"},
       2, 4},
      {"not_pfun",
       {"in(eps_w,a); eps_w != pair(Y,Z)", "in(eps_w,a); ~in(Y,b)", "in(eps_w,a); ~in(Z,c)",
        "in(pair(eps_x,eps_y),a); in(pair(eps_x,eps_z),a); eps_y != eps_z"},
       4, 2},
      // star rules for pairs that are not explicit
      {"prod_star", {"x = pair(eps_y,eps_z); in(eps_y,a); in(eps_z,b)"}, 2, 0},
      {"not_prod_star", {"x != pair(Y,Z)", "~in(Y,a)", "~in(Z,b)"}, 0, 2},
      {"inv_star", {"x = pair(eps_y,eps_z); in(pair(eps_z,eps_y),a)"}, 2, 0},
      {"not_inv_star", {"x != pair(Y,Z)", "~in(pair(Z,Y),a)"}, 0, 2},
  };
  return table;
}

namespace {

struct GoldenShape {
  Branches branches;
  std::set<std::string> unknowns;  // metavariable and witness placeholders
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

GoldenShape golden_shape(const GoldenRule& g, const SuperRule& r) {
  GoldenShape shape;
  ParseOptions opts;
  opts.free_upper_vars = true;
  opts.pattern_vars = r.params;
  for (const auto& b : g.branches) {
    std::vector<Formula> fs;
    for (const auto& part : split(b, ';')) {
      Formula f = parse_formula(part, opts);
      // Witness placeholders become unknowns too.
      for (const auto& e : {"eps_x", "eps_y", "eps_z", "eps_w"}) {
        f = replace_term(f, Term::constant(e), Term::var(std::string("?") + e));
      }
      for (const auto& v : free_vars(f))
        if (!r.params.count(v)) shape.unknowns.insert(v);
      fs.push_back(f);
    }
    shape.branches.push_back(fs);
  }
  return shape;
}

Formula flip_equality(const Formula& f) {
  if (f.is(FormulaKind::Equal)) return Formula::equal(f.args()[1], f.args()[0]);
  if (f.is(FormulaKind::Not) && f.operand().is(FormulaKind::Equal))
    return Formula::negate(Formula::equal(f.operand().args()[1], f.operand().args()[0]));
  return f;
}

// The bindings must be a bijection onto metavariables / epsilon terms.
bool consistent(const Substitution& s) {
  std::set<std::string> images;
  for (const auto& [v, t] : s.vars) {
    bool eps = v.rfind("?eps", 0) == 0;
    if (eps ? !t.is_epsilon() : !t.is_meta()) return false;
    if (!images.insert(t.key()).second) return false;
  }
  return true;
}

std::optional<Substitution> match_literal(const Formula& g, const Formula& c, const std::set<std::string>& unknowns,
                                          const Substitution& s) {
  if (auto m = match(g, c, unknowns, s); m && consistent(*m)) return m;
  Formula flipped = flip_equality(g);
  if (flipped.key() != g.key())
    if (auto m = match(flipped, c, unknowns, s); m && consistent(*m)) return m;
  return std::nullopt;
}

struct BranchPerm {
  std::vector<std::size_t> branch_of;            // golden branch i -> compiled branch
  std::vector<std::vector<std::size_t>> formula_of;  // golden formula -> compiled formula
};

bool match_formulas(const std::vector<Formula>& g, const std::vector<Formula>& c, const std::set<std::string>& unknowns,
                    std::size_t i, std::vector<bool>& used, std::vector<std::size_t>& order, Substitution& s) {
  if (i == g.size()) return true;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (used[j]) continue;
    auto m = match_literal(g[i], c[j], unknowns, s);
    if (!m) continue;
    Substitution saved = s;
    s = *m;
    used[j] = true;
    order.push_back(j);
    if (match_formulas(g, c, unknowns, i + 1, used, order, s)) return true;
    order.pop_back();
    used[j] = false;
    s = saved;
  }
  return false;
}

bool match_branches(const GoldenShape& g, const Branches& c, std::size_t i, std::vector<bool>& used, BranchPerm& perm,
                    Substitution& s) {
  if (i == g.branches.size()) return true;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (used[j] || c[j].size() != g.branches[i].size()) continue;
    Substitution trial = s;
    std::vector<bool> fused(c[j].size(), false);
    std::vector<std::size_t> order;
    if (!match_formulas(g.branches[i], c[j], g.unknowns, 0, fused, order, trial)) continue;
    used[j] = true;
    perm.branch_of.push_back(j);
    perm.formula_of.push_back(order);
    if (match_branches(g, c, i + 1, used, perm, trial)) {
      s = trial;
      return true;
    }
    perm.branch_of.pop_back();
    perm.formula_of.pop_back();
    used[j] = false;
  }
  return false;
}

std::optional<BranchPerm> golden_match(const GoldenRule& g, const SuperRule& r, std::string& why) {
  GoldenShape shape = golden_shape(g, r);
  if (shape.branches.size() != r.branches.size()) {
    why = "branch count " + std::to_string(r.branches.size()) + ", expected " + std::to_string(shape.branches.size());
    return std::nullopt;
  }
  if (static_cast<int>(r.epsilons.size()) != g.epsilons) {
    why = "epsilon count " + std::to_string(r.epsilons.size()) + ", expected " + std::to_string(g.epsilons);
    return std::nullopt;
  }
  if (static_cast<int>(r.metas.size()) != g.metas) {
    why = "metavariable count " + std::to_string(r.metas.size()) + ", expected " + std::to_string(g.metas);
    return std::nullopt;
  }
  std::vector<bool> used(r.branches.size(), false);
  BranchPerm perm;
  Substitution s;
  if (!match_branches(shape, r.branches, 0, used, perm, s)) {
    why = "branches differ";
    return std::nullopt;
  }
  return perm;
}

}  // namespace

GoldenReport verify_against_golden(const RuleSet& rules) {
  GoldenReport rep;
  for (const auto& g : golden_table()) {
    ++rep.checked;
    const SuperRule* r = rules.find(g.name);
    if (!r) {
      rep.mismatches.push_back({g.name, "rule missing"});
      continue;
    }
    std::string why;
    if (!golden_match(g, *r, why)) rep.mismatches.push_back({g.name, why});
  }
  // Schemas: comprehension and enumerated sets are hard-coded.
  auto check_schema = [&](const std::string& name, const std::string& input, const std::string& expected_text) {
    ++rep.checked;
    const Schema* s = rules.schema(name);
    if (!s) {
      rep.mismatches.push_back({name, "schema missing"});
      return;
    }
    auto out = s->apply(parse_formula(input));
    std::string got;
    if (out)
      for (std::size_t i = 0; i < out->size(); ++i) {
        if (i) got += " | ";
        for (std::size_t j = 0; j < (*out)[i].size(); ++j) got += (j ? "; " : "") + to_string((*out)[i][j]);
      }
    std::string want;
    auto parts = split(expected_text, '|');
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) want += " | ";
      auto fs = split(parts[i], ';');
      for (std::size_t j = 0; j < fs.size(); ++j) want += (j ? "; " : "") + to_string(parse_formula(fs[j]));
    }
    if (got != want) rep.mismatches.push_back({name, "got " + got + ", expected " + want});
  };
  check_schema("compr", "in(c, {[Y]: Y | p(Y)})", "p(c)");
  check_schema("not_compr", "~in(c, {[Y]: Y | p(Y)})", "~p(c)");
  check_schema("enum", "in(c, enum(e1,e2,e3))", "c = e1 | c = e2 | c = e3");
  check_schema("not_enum", "~in(c, enum(e1,e2,e3))", "c != e1; c != e2; c != e3");
  return rep;
}

void apply_golden_order(RuleSet& rules) {
  RuleSet rebuilt;
  rebuilt.id = rules.id;
  rebuilt.schemas = rules.schemas;
  for (auto r : rules.rules) {
    for (const auto& g : golden_table()) {
      if (g.name != r.name) continue;
      std::string why;
      if (auto perm = golden_match(g, r, why)) {
        Branches ordered;
        for (std::size_t i = 0; i < perm->branch_of.size(); ++i) {
          const auto& src = r.branches[perm->branch_of[i]];
          std::vector<Formula> fs;
          for (std::size_t j : perm->formula_of[i]) fs.push_back(src[j]);
          ordered.push_back(fs);
        }
        r.branches = ordered;
      }
    }
    rebuilt.add(std::move(r));
  }
  rules = std::move(rebuilt);
}

std::pair<Formula, Formula> ground_instance(const Prr& p) {
  Substitution s;
  for (const auto& v : p.params) s.vars[v] = Term::constant(v);
  return {substitute(p.lhs, s), substitute(p.rhs, s)};
}

std::vector<BConstruct> b_constructs() {
  std::vector<BConstruct> out;
  for (const auto& p : b_rewrite_rules()) {
    auto [lhs, rhs] = ground_instance(p);
    if (!lhs.is(FormulaKind::Atom) || lhs.name() != "in" || !rhs.is(FormulaKind::Atom) || rhs.name() != "in") continue;
    if (lhs.args()[0].key() != rhs.args()[0].key()) continue;
    BConstruct c{p.name, lhs.args()[1], rhs.args()[1], {}};
    if (p.name == "ovr")
      for (const char* t : {"in(a,rel(s,t))", "in(b,rel(s,t))"}) c.typing.push_back(parse_formula(t));
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace supded
