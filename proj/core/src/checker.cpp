#include "supded/checker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "supded/relations.hpp"
#include "supded/syntax.hpp"
#include "supded/unify.hpp"

namespace supded {

const char* to_string(CheckError e) {
  switch (e) {
    case CheckError::None: return "None";
    case CheckError::Malformed: return "Malformed";
    case CheckError::RuleSetMismatch: return "RuleSetMismatch";
    case CheckError::ProblemMismatch: return "ProblemMismatch";
    case CheckError::UnknownRule: return "UnknownRule";
    case CheckError::PrincipalMissing: return "PrincipalMissing";
    case CheckError::BranchMismatch: return "BranchMismatch";
    case CheckError::BadClosure: return "BadClosure";
    case CheckError::BadInstantiationOrder: return "BadInstantiationOrder";
  }
  return "?";
}

namespace {

struct Reject {
  CheckError error;
  std::string detail;
};

struct Entry {
  std::string rule;  // base rule name
  std::string principal;
  std::map<int, std::string> fixed;  // local meta -> term key
};

struct State {
  std::unordered_set<std::string> keys;
  std::set<int> metas;
  std::map<std::string, Term> witnesses;
  std::map<int, Entry> table;

  void add(const Formula& f) {
    keys.insert(f.key());
    for (int m : metas_of(f)) metas.insert(m);
  }
};

Formula neq(const Term& a, const Term& b) { return Formula::negate(Formula::equal(a, b)); }

Formula open(const Formula& q, const Term& t) {
  Substitution s;
  s.vars[q.binder()] = t;
  return substitute(q.body(), s);
}

bool is_closure(const std::string& r) {
  return r == "close" || r == "close_sym" || r == "close_refl" || r == "close_bot" || r == "close_not_top";
}

class Checker {
 public:
  Checker(const ProofTrace& t, const RuleSet& rules) : t_(t), rules_(rules) {}

  CheckVerdict run() {
    CheckVerdict v;
    if (t_.rules_id != rules_.fingerprint()) {
      v.error = CheckError::RuleSetMismatch;
      v.detail = "trace uses " + t_.rules_id + ", checker has " + rules_.fingerprint();
      return v;
    }
    State st;
    std::vector<Formula> roots;
    try {
      static const std::map<std::string, Term> none;
      ParseOptions po;
      po.witnesses = &none;
      for (const auto& r : t_.roots) roots.push_back(parse_formula(r, po));
      std::set<std::string> names;
      for (const auto& w : t_.witnesses) {
        if (!names.insert(w.name).second) throw Reject{CheckError::Malformed, "duplicate witness " + w.name};
        if (w.node < 0 || w.node >= static_cast<int>(t_.nodes.size()))
          throw Reject{CheckError::Malformed, "witness " + w.name + " names no node"};
        Term e = parse_term(w.term, po);
        if (!e.is_epsilon()) throw Reject{CheckError::Malformed, "witness " + w.name + " is not an epsilon term"};
        by_node_[w.node].emplace_back(w.name, e);
      }
    } catch (const SyntaxError& e) {
      v.error = CheckError::Malformed;
      v.detail = e.what();
      return v;
    } catch (const Reject& r) {
      v.error = r.error;
      v.detail = r.detail;
      return v;
    }
    if (problem_hash(roots) != t_.problem) {
      v.error = CheckError::ProblemMismatch;
      v.detail = "problem hash does not match the root formulas";
      return v;
    }
    if (t_.nodes.empty()) {
      v.error = CheckError::BadClosure;
      v.detail = "no proof nodes";
      return v;
    }
    for (const auto& f : roots) st.add(f);
    rel_ = relation_properties(roots);
    try {
      node(0, std::move(st));
    } catch (const Reject& r) {
      v.node = current_;
      v.error = r.error;
      v.detail = r.detail;
      return v;
    }
    v.accepted = true;
    return v;
  }

 private:
  Formula formula(const std::string& s, const State& st) {
    ParseOptions po;
    po.witnesses = &st.witnesses;
    try {
      return parse_formula(s, po);
    } catch (const SyntaxError& e) {
      throw Reject{CheckError::Malformed, e.what()};
    }
  }

  Term term(const std::string& s, const State& st) {
    ParseOptions po;
    po.witnesses = &st.witnesses;
    try {
      return parse_term(s, po);
    } catch (const SyntaxError& e) {
      throw Reject{CheckError::Malformed, e.what()};
    }
  }

  void node(int id, State st) {
    current_ = id;
    const TraceNode& n = t_.nodes.at(id);
    if (auto it = by_node_.find(id); it != by_node_.end())
      for (const auto& [name, e] : it->second) st.witnesses[name] = e;
    std::vector<Formula> principals;
    for (const auto& p : n.principals) principals.push_back(formula(p, st));
    Branches adds;
    for (const auto& b : n.branches) {
      adds.emplace_back();
      for (const auto& f : b.adds) adds.back().push_back(formula(f, st));
    }
    if (n.rule != "cut")
      for (const auto& p : principals)
        if (!st.keys.count(p.key())) throw Reject{CheckError::PrincipalMissing, to_string(p)};
    Branches expected = expand(n, principals, st);
    if (expected.size() != adds.size())
      throw Reject{CheckError::BranchMismatch, "rule yields " + std::to_string(expected.size()) + " branch(es), trace has " +
                                                   std::to_string(adds.size())};
    for (std::size_t i = 0; i < adds.size(); ++i) {
      bool same = expected[i].size() == adds[i].size();
      for (std::size_t j = 0; same && j < adds[i].size(); ++j) same = expected[i][j].key() == adds[i][j].key();
      if (!same) throw Reject{CheckError::BranchMismatch, "branch " + std::to_string(i + 1) + " differs from the rule"};
    }
    for (std::size_t i = 0; i < n.branches.size(); ++i)
      if (n.branches[i].child < 0) throw Reject{CheckError::BadClosure, "open branch " + std::to_string(i + 1)};
    for (std::size_t i = 0; i < n.branches.size(); ++i) {
      State child = i + 1 == n.branches.size() ? std::move(st) : st;
      for (const auto& f : adds[i]) child.add(f);
      node(n.branches[i].child, std::move(child));
    }
  }

  static void need(bool ok, CheckError e, const std::string& why) {
    if (!ok) throw Reject{e, why};
  }

  static void arity(const std::vector<Formula>& ps, std::size_t k, const std::string& rule) {
    need(ps.size() == k, CheckError::BranchMismatch, rule + " takes " + std::to_string(k) + " principal(s)");
  }

  void no_extras(const TraceNode& n) {
    need(n.inst.empty() && n.fresh.empty() && n.ref < 0 && n.prior < 0, CheckError::BranchMismatch,
         n.rule + " records no instantiation");
  }

  Branches expand(const TraceNode& n, const std::vector<Formula>& ps, State& st) {
    const std::string& r = n.rule;
    if (is_closure(r)) {
      no_extras(n);
      closure(r, ps);
      return {};
    }
    if (auto b = core(r, ps)) {
      no_extras(n);
      return *b;
    }
    if (r.starts_with("gamma_")) return gamma(n, ps, st);
    if (auto b = relational(r, ps)) {
      no_extras(n);
      return *b;
    }
    if (const Schema* s = rules_.schema(r)) {
      no_extras(n);
      arity(ps, 1, r);
      auto b = s->apply(ps[0]);
      need(b.has_value(), CheckError::BranchMismatch, r + " does not apply to " + to_string(ps[0]));
      return *b;
    }
    return super(n, ps, st);
  }

  // Binary relation literal: symbol and arguments, equality included.
  static bool binary(const Formula& a) { return a.is_atomic() && a.args().size() == 2; }

  void closure(const std::string& r, const std::vector<Formula>& ps) const {
    auto fail = [&] { throw Reject{CheckError::BadClosure, r + " does not close these principals"}; };
    if (r == "close_bot") {
      if (ps.size() != 1 || !ps[0].is(FormulaKind::False)) fail();
    } else if (r == "close_not_top") {
      if (ps.size() != 1 || !ps[0].is(FormulaKind::Not) || !ps[0].operand().is(FormulaKind::True)) fail();
    } else if (r == "close_refl") {
      if (ps.size() != 1 || !ps[0].is(FormulaKind::Not) || !binary(ps[0].operand())) fail();
      const Formula& a = ps[0].operand();
      if (!relation_info(rel_, a.name()).reflexive || a.args()[0].key() != a.args()[1].key()) fail();
    } else if (r == "close") {
      if (ps.size() != 2 || !ps[1].is(FormulaKind::Not) || ps[1].operand().key() != ps[0].key()) fail();
    } else {
      if (ps.size() != 2 || !binary(ps[0]) || !ps[1].is(FormulaKind::Not) || !binary(ps[1].operand())) fail();
      const Formula& n = ps[1].operand();
      if (ps[0].kind() != n.kind() || ps[0].name() != n.name() || !relation_info(rel_, n.name()).symmetric) fail();
      const auto& e = ps[0].args();
      const auto& d = n.args();
      if (e[0].key() != d[1].key() || e[1].key() != d[0].key()) fail();
    }
  }

  static std::optional<Branches> core(const std::string& r, const std::vector<Formula>& ps) {
    static const std::set<std::string> names = {"alpha_and",      "alpha_not_or",    "alpha_not_imply", "alpha_not_not",
                                                "beta_or",        "beta_not_and",    "beta_imply",      "beta_iff",
                                                "beta_not_iff",   "delta_exists",    "delta_not_forall"};
    if (!names.count(r)) return std::nullopt;
    arity(ps, 1, r);
    const Formula& f = ps[0];
    auto shape = [&](FormulaKind k, bool negated) {
      bool ok = negated ? f.is(FormulaKind::Not) && f.operand().is(k) : f.is(k);
      need(ok, CheckError::BranchMismatch, r + " does not apply to " + to_string(f));
      return negated ? f.operand() : f;
    };
    auto N = [](const Formula& x) { return Formula::negate(x); };
    if (r == "alpha_and") {
      auto a = shape(FormulaKind::And, false);
      return Branches{{a.lhs(), a.rhs()}};
    }
    if (r == "alpha_not_or") {
      auto a = shape(FormulaKind::Or, true);
      return Branches{{N(a.lhs()), N(a.rhs())}};
    }
    if (r == "alpha_not_imply") {
      auto a = shape(FormulaKind::Implies, true);
      return Branches{{a.lhs(), N(a.rhs())}};
    }
    if (r == "alpha_not_not") {
      auto a = shape(FormulaKind::Not, true);
      return Branches{{a.operand()}};
    }
    if (r == "beta_or") {
      auto a = shape(FormulaKind::Or, false);
      return Branches{{a.lhs()}, {a.rhs()}};
    }
    if (r == "beta_not_and") {
      auto a = shape(FormulaKind::And, true);
      return Branches{{N(a.lhs())}, {N(a.rhs())}};
    }
    if (r == "beta_imply") {
      auto a = shape(FormulaKind::Implies, false);
      return Branches{{N(a.lhs())}, {a.rhs()}};
    }
    if (r == "beta_iff") {
      auto a = shape(FormulaKind::Iff, false);
      return Branches{{N(a.lhs()), N(a.rhs())}, {a.lhs(), a.rhs()}};
    }
    if (r == "beta_not_iff") {
      auto a = shape(FormulaKind::Iff, true);
      return Branches{{N(a.lhs()), a.rhs()}, {a.lhs(), N(a.rhs())}};
    }
    if (r == "delta_exists") {
      auto a = shape(FormulaKind::Exists, false);
      return Branches{{open(a, make_epsilon(a.binder(), a.body()))}};
    }
    auto a = shape(FormulaKind::Forall, true);
    return Branches{{N(open(a, make_epsilon(a.binder(), N(a.body()))))}};
  }

  Term fresh_meta(const TraceNode& n, std::size_t i, const State& st, std::set<int>& seen) {
    Term m = term(n.fresh[i], st);
    need(m.is_meta(), CheckError::BranchMismatch, "fresh entry " + n.fresh[i] + " is not a metavariable");
    need(!st.metas.count(m.meta_id()) && seen.insert(m.meta_id()).second, CheckError::BranchMismatch,
         "metavariable " + n.fresh[i] + " is not fresh");
    return m;
  }

  void claim_ref(const TraceNode& n, const State& st) {
    need(n.ref >= 0 && !st.table.count(n.ref), CheckError::BadInstantiationOrder,
         "instantiation reference missing or reused");
  }

  Branches gamma(const TraceNode& n, const std::vector<Formula>& ps, State& st) {
    const std::string& r = n.rule;
    arity(ps, 1, r);
    bool negative = r.starts_with("gamma_not_exists");
    const Formula& f = ps[0];
    bool ok = negative ? f.is(FormulaKind::Not) && f.operand().is(FormulaKind::Exists) : f.is(FormulaKind::Forall);
    need(ok, CheckError::BranchMismatch, r + " does not apply to " + to_string(f));
    const Formula& q = negative ? f.operand() : f;
    auto wrap = [&](const Formula& x) { return negative ? Formula::negate(x) : x; };
    if (r == "gamma_forall_m" || r == "gamma_not_exists_m") {
      need(n.fresh.size() == 1 && n.inst.empty() && n.ref < 0 && n.prior < 0, CheckError::BranchMismatch,
           r + " mints exactly one metavariable");
      std::set<int> seen;
      return {{wrap(open(q, fresh_meta(n, 0, st, seen)))}};
    }
    if (r == "gamma_forall_inst" || r == "gamma_not_exists_inst") {
      need(n.inst.size() == 1 && n.fresh.empty() && n.prior < 0, CheckError::BranchMismatch,
           r + " records one instantiation");
      claim_ref(n, st);
      Term t = term(n.inst[0].second, st);
      st.table[n.ref] = {r, f.key(), {}};
      return {{wrap(open(q, t))}};
    }
    throw Reject{CheckError::UnknownRule, r};
  }

  std::optional<Branches> relational(const std::string& r, const std::vector<Formula>& ps) const {
    if (r == "fun") {
      arity(ps, 1, r);
      const Formula& f = ps[0];
      need(f.is(FormulaKind::Not) && f.operand().is(FormulaKind::Equal), CheckError::BranchMismatch,
           "fun needs a disequation");
      const Term& a = f.operand().args()[0];
      const Term& b = f.operand().args()[1];
      need(a.is_app() && b.is_app() && a.name() == b.name() && a.args().size() == b.args().size() && !a.args().empty(),
           CheckError::BranchMismatch, "fun needs the same function symbol on both sides");
      Branches out;
      for (std::size_t i = 0; i < a.args().size(); ++i) out.push_back({neq(a.args()[i], b.args()[i])});
      return out;
    }
    if (r == "pred") {
      arity(ps, 2, r);
      const Formula& p = ps[0];
      const Formula& n = ps[1];
      need(p.is(FormulaKind::Atom) && n.is(FormulaKind::Not) && n.operand().is(FormulaKind::Atom) &&
               p.name() == n.operand().name() && p.args().size() == n.operand().args().size() && !p.args().empty(),
           CheckError::BranchMismatch, "pred needs P(..) and ~P(..)");
      Branches out;
      for (std::size_t i = 0; i < p.args().size(); ++i) out.push_back({neq(p.args()[i], n.operand().args()[i])});
      return out;
    }
    if (r == "not_refl") {
      arity(ps, 1, r);
      const Formula& n = ps[0];
      need(n.is(FormulaKind::Not) && n.operand().is(FormulaKind::Atom) && binary(n.operand()) &&
               relation_info(rel_, n.operand().name()).reflexive,
           CheckError::BranchMismatch, "not_refl needs a negated reflexive relation");
      return Branches{{neq(n.operand().args()[0], n.operand().args()[1])}};
    }
    static const std::set<std::string> pairwise = {"sym", "trans", "transsym", "transeq", "transeqsym"};
    if (pairwise.count(r)) {
      arity(ps, 2, r);
      const Formula& p = ps[0];
      const Formula& d = ps[1];
      need(binary(p) && d.is(FormulaKind::Not) && binary(d.operand()), CheckError::BranchMismatch,
           r + " needs a relation literal and a negated one");
      const Formula& n = d.operand();
      const std::string& rel = n.name();
      PredicateInfo info = relation_info(rel_, rel);
      bool with_eq = r == "transeq" || r == "transeqsym";
      need(with_eq ? p.is(FormulaKind::Equal) && rel != "=" : p.kind() == n.kind() && p.name() == rel,
           CheckError::BranchMismatch, r + " principals do not fit");
      bool ok = r == "sym" ? info.symmetric && rel != "=" : info.transitive;
      if (r == "transsym" || r == "transeqsym") ok = ok && info.symmetric;
      need(ok, CheckError::BranchMismatch, rel + " lacks the property " + r + " needs");
      auto R = [&](const Term& x, const Term& y) {
        return Formula::negate(rel == "=" ? Formula::equal(x, y) : Formula::atom(rel, {x, y}));
      };
      const Term& s = p.args()[0];
      const Term& t = p.args()[1];
      const Term& u = n.args()[0];
      const Term& v = n.args()[1];
      Branches out;
      if (r == "sym") out = {{neq(t, u)}, {neq(s, v)}};
      if (r == "trans") out = {{neq(u, s), R(u, s)}, {neq(t, v), R(t, v)}};
      if (r == "transsym") out = {{neq(v, s), R(v, s)}, {neq(t, u), R(t, u)}};
      if (r == "transeq") out = {{neq(u, s), R(u, s)}, {R(u, s), R(t, v)}, {neq(t, v), R(t, v)}};
      if (r == "transeqsym") out = {{neq(v, s), R(v, s)}, {R(v, s), R(t, u)}, {neq(t, u), R(t, u)}};
      // Repeated literals in a branch (always the case on equality) are kept once.
      for (auto& br : out) {
        std::vector<Formula> kept;
        for (const auto& f : br)
          if (std::none_of(kept.begin(), kept.end(), [&](const Formula& g) { return g.key() == f.key(); }))
            kept.push_back(f);
        br = std::move(kept);
      }
      return out;
    }
    if (r == "cut") {
      arity(ps, 1, r);
      return Branches{{ps[0]}, {Formula::negate(ps[0])}};
    }
    return std::nullopt;
  }

  Branches super(const TraceNode& n, const std::vector<Formula>& ps, State& st) {
    auto ref = rules_.resolve(n.rule);
    need(ref.has_value(), CheckError::UnknownRule, n.rule);
    const SuperRule& r = *ref->rule;
    arity(ps, 1, n.rule);
    auto params = match(r.conclusion, ps[0], r.params);
    need(params.has_value(), CheckError::BranchMismatch, n.rule + " does not apply to " + to_string(ps[0]));
    const std::set<int>& fixed = ref->fixed;
    std::map<int, Term> values;
    std::map<int, std::string> fixed_keys;
    need(n.inst.size() == fixed.size(), CheckError::BranchMismatch, "instantiation does not match the variant");
    for (const auto& [name, text] : n.inst) {
      int k = -1;
      for (int j : fixed)
        if (r.metas[j].name() == name) k = j;
      need(k >= 0 && !values.count(k), CheckError::BranchMismatch, "variant " + n.rule + " does not fix " + name);
      values[k] = term(text, st);
      fixed_keys[k] = values[k].key();
    }
    need(n.fresh.size() == r.metas.size() - fixed.size(), CheckError::BranchMismatch,
         "wrong number of fresh metavariables");
    std::set<int> seen;
    std::size_t next = 0;
    for (std::size_t j = 0; j < r.metas.size(); ++j)
      if (!fixed.count(static_cast<int>(j))) values[static_cast<int>(j)] = fresh_meta(n, next++, st, seen);
    if (fixed.empty()) {
      need(n.ref < 0 && n.prior < 0, CheckError::BranchMismatch, "base rule records no reference");
    } else {
      claim_ref(n, st);
      // A one-metavariable variant stands alone (the base application may be
      // pruned away); a variant fixing k > 1 continues an instance fixing k - 1.
      if (fixed.size() == 1) {
        need(n.prior < 0, CheckError::BadInstantiationOrder, "variant " + n.rule + " continues no instance");
      } else {
        auto it = st.table.find(n.prior);
        need(it != st.table.end(), CheckError::BadInstantiationOrder, "variant " + n.rule + " has no prior instance");
        const Entry& e = it->second;
        bool ok = e.rule == r.name && e.principal == ps[0].key() && e.fixed.size() + 1 == fixed.size();
        for (const auto& [k, v] : e.fixed) ok = ok && fixed_keys.count(k) && fixed_keys.at(k) == v;
        need(ok, CheckError::BadInstantiationOrder, "variant " + n.rule + " does not extend its prior instance");
      }
      st.table[n.ref] = {r.name, ps[0].key(), fixed_keys};
    }
    return instantiate(r, *params, values);
  }

  const ProofTrace& t_;
  const RuleSet& rules_;
  std::map<int, std::vector<std::pair<std::string, Term>>> by_node_;
  RelationTable rel_;
  int current_ = -1;
};

}  // namespace

CheckVerdict check_proof(const ProofTrace& t, const RuleSet& rules) {
  try {
    return Checker(t, rules).run();
  } catch (const std::exception& e) {
    CheckVerdict v;
    v.error = CheckError::Malformed;
    v.detail = e.what();
    return v;
  }
}

}  // namespace supded
