#include "supded/engine.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "supded/relations.hpp"
#include "supded/unify.hpp"

namespace supded {

const char* to_string(ProofStatus s) {
  switch (s) {
    case ProofStatus::Theorem: return "Theorem";
    case ProofStatus::Exhausted: return "GaveUp";
    case ProofStatus::Timeout: return "Timeout";
  }
  return "?";
}

int count_nodes(const ProofNode& n) {
  int c = 1;
  for (const auto& ch : n.children) c += count_nodes(*ch);
  return c;
}

namespace {

Formula neq(const Term& a, const Term& b) { return Formula::negate(Formula::equal(a, b)); }

std::string upper_name(const std::string& binder) {
  std::string n;
  for (char c : binder)
    if (std::isalnum(static_cast<unsigned char>(c))) n += c;
  if (n.empty()) n = "M";
  n[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(n[0])));
  return n;
}

Formula open_binder(const Formula& q, const Term& t) {
  Substitution s;
  s.vars[q.binder()] = t;
  return substitute(q.body(), s);
}

bool is_pair(const Term& t) { return t.is_app_of("pair", 2); }

// ---------------------------------------------------------------- plans

enum class PlanKind { None, Core, Schema, Rule, EqRule, Fun, GammaCore };

struct Plan {
  PlanKind kind = PlanKind::None;
  RuleClass klass = RuleClass::Alpha;
  const Schema* schema = nullptr;
  const SuperRule* rule = nullptr;
  Substitution params;
};

Plan core_plan(const Formula& f) {
  Plan p;
  auto set = [&](PlanKind k, RuleClass c) {
    p.kind = k;
    p.klass = c;
  };
  switch (f.kind()) {
    case FormulaKind::And: set(PlanKind::Core, RuleClass::Alpha); break;
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff: set(PlanKind::Core, RuleClass::Beta); break;
    case FormulaKind::Exists: set(PlanKind::Core, RuleClass::Delta); break;
    case FormulaKind::Forall: set(PlanKind::GammaCore, RuleClass::Gamma); break;
    case FormulaKind::Not: {
      const Formula& a = f.operand();
      switch (a.kind()) {
        case FormulaKind::Not:
        case FormulaKind::Or:
        case FormulaKind::Implies: set(PlanKind::Core, RuleClass::Alpha); break;
        case FormulaKind::And:
        case FormulaKind::Iff: set(PlanKind::Core, RuleClass::Beta); break;
        case FormulaKind::Forall: set(PlanKind::Core, RuleClass::Delta); break;
        case FormulaKind::Exists: set(PlanKind::GammaCore, RuleClass::Gamma); break;
        default: break;
      }
      break;
    }
    default: break;
  }
  return p;
}

Plan make_plan(const Formula& f, const RuleSet& rules) {
  Plan p = core_plan(f);
  if (p.kind != PlanKind::None || !f.is_literal()) return p;
  const Formula& a = literal_atom(f);
  if (a.is(FormulaKind::Equal)) {
    bool negative = f.is(FormulaKind::Not);
    const Term& l = a.args()[0];
    const Term& r = a.args()[1];
    if (negative && l.is_app() && r.is_app() && l.name() == r.name() && l.args().size() == r.args().size() &&
        !l.args().empty() && !f.has_meta() && l.key() != r.key()) {
      p.kind = PlanKind::Fun;
      p.klass = l.args().size() == 1 ? RuleClass::Alpha : RuleClass::Beta;
      return p;
    }
    if (f.has_meta() || l.key() == r.key()) return p;
    if (is_pair(l) || is_pair(r)) {
      if (negative || !is_pair(l) || !is_pair(r)) return p;
      if (auto m = rules.first_match(f, true)) {
        p.kind = PlanKind::Rule;
        p.rule = m->rule;
        p.params = std::move(m->params);
        p.klass = p.rule->klass();
      }
      return p;
    }
    if (auto m = rules.first_match(f, true)) {
      p.kind = PlanKind::EqRule;
      p.rule = m->rule;
      p.params = std::move(m->params);
      p.klass = p.rule->klass();
    }
    return p;
  }
  for (const auto& s : rules.schemas) {
    if (s.apply(f)) {
      p.kind = PlanKind::Schema;
      p.schema = &s;
      p.klass = s.klass;
      return p;
    }
  }
  if (auto m = rules.first_match(f, true)) {
    p.kind = PlanKind::Rule;
    p.rule = m->rule;
    p.params = std::move(m->params);
    p.klass = p.rule->klass();
  }
  return p;
}

// ---------------------------------------------------------------- branch state

struct MetaLink {
  Formula antecedent;
  const SuperRule* rule = nullptr;  // nullptr: core gamma rule
  int local = 0;
  std::map<int, Term> fixed;
  int ref = -1;
  Term self;
};

struct Closure {
  std::string rule;
  std::vector<Formula> principals;
};

struct Branch {
  std::vector<Formula> formulas;
  std::unordered_set<std::string> keys;
  std::unordered_set<std::string> expanded;
  std::unordered_set<std::string> done;
  std::map<std::string, int> counts;
  std::map<int, MetaLink> links;
  std::unordered_map<std::string, const SuperRule*> origin;  // rule that produced a formula
  std::optional<Closure> closure;
  const RelationTable* rel = nullptr;

  bool has(const Formula& f) const { return keys.count(f.key()) > 0; }

  // Returns true when the formula is new on the branch.
  bool add(const Formula& f) {
    if (!keys.insert(f.key()).second) return false;
    formulas.push_back(f);
    if (!closure) closure = closes_with(f);
    return true;
  }

  std::optional<Closure> closes_with(const Formula& f) const {
    if (f.is(FormulaKind::False)) return Closure{"close_bot", {f}};
    if (f.is(FormulaKind::Not) && f.operand().is(FormulaKind::True)) return Closure{"close_not_top", {f}};
    bool neg = f.is(FormulaKind::Not);
    const Formula& a = neg ? f.operand() : f;
    bool binary = a.is_atomic() && a.args().size() == 2;
    static const RelationTable none;
    PredicateInfo info;
    if (binary) info = relation_info(rel ? *rel : none, a.name());
    if (neg && info.reflexive && a.args()[0].key() == a.args()[1].key()) return Closure{"close_refl", {f}};
    Formula c = complement(f);
    if (has(c)) return neg ? Closure{"close", {c, f}} : Closure{"close", {f, c}};
    if (info.symmetric) {
      Formula flipped = a.is(FormulaKind::Equal) ? Formula::equal(a.args()[1], a.args()[0])
                                                  : Formula::atom(a.name(), {a.args()[1], a.args()[0]});
      if (neg && has(flipped)) return Closure{"close_sym", {flipped, f}};
      Formula nflipped = Formula::negate(flipped);
      if (!neg && has(nflipped)) return Closure{"close_sym", {f, nflipped}};
    }
    return std::nullopt;
  }
};

std::optional<Closure> scan_closure(const std::vector<Formula>& fs) {
  Branch b;
  for (const auto& f : fs) {
    b.add(f);
    if (b.closure) return b.closure;
  }
  return std::nullopt;
}

// A chosen rule application together with its effect on branch bookkeeping.
struct Step {
  ProofNode node;
  std::string expand;  // principal consumed
  std::string done;    // signature recorded
  std::string count;   // instantiation counter bumped
  std::vector<std::pair<int, MetaLink>> links;
  const SuperRule* rule = nullptr;
};

struct Abort {
  bool timeout;
};

}  // namespace

std::optional<ProofNode> try_close(const std::vector<Formula>& branch) {
  auto c = scan_closure(branch);
  if (!c) return std::nullopt;
  ProofNode n;
  n.rule = c->rule;
  n.principals = c->principals;
  return n;
}

std::optional<RuleClass> classify(const Formula& f, const RuleSet& rules) {
  if (f.is(FormulaKind::False) || (f.is(FormulaKind::Not) && f.operand().is(FormulaKind::True)))
    return RuleClass::Closure;
  if (f.is(FormulaKind::Not) && f.operand().is(FormulaKind::Equal) &&
      f.operand().args()[0].key() == f.operand().args()[1].key())
    return RuleClass::Closure;
  Plan p = make_plan(f, rules);
  if (p.kind == PlanKind::None) return std::nullopt;
  return p.klass;
}

namespace {

std::pair<std::string, Branches> core_expand(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::And: return {"alpha_and", {{f.lhs(), f.rhs()}}};
    case FormulaKind::Or: return {"beta_or", {{f.lhs()}, {f.rhs()}}};
    case FormulaKind::Implies: return {"beta_imply", {{Formula::negate(f.lhs())}, {f.rhs()}}};
    case FormulaKind::Iff:
      return {"beta_iff", {{Formula::negate(f.lhs()), Formula::negate(f.rhs())}, {f.lhs(), f.rhs()}}};
    case FormulaKind::Exists: return {"delta_exists", {{open_binder(f, make_epsilon(f.binder(), f.body()))}}};
    default: break;
  }
  const Formula& a = f.operand();
  switch (a.kind()) {
    case FormulaKind::Not: return {"alpha_not_not", {{a.operand()}}};
    case FormulaKind::Or: return {"alpha_not_or", {{Formula::negate(a.lhs()), Formula::negate(a.rhs())}}};
    case FormulaKind::Implies: return {"alpha_not_imply", {{a.lhs(), Formula::negate(a.rhs())}}};
    case FormulaKind::And: return {"beta_not_and", {{Formula::negate(a.lhs())}, {Formula::negate(a.rhs())}}};
    case FormulaKind::Iff:
      return {"beta_not_iff", {{Formula::negate(a.lhs()), a.rhs()}, {a.lhs(), Formula::negate(a.rhs())}}};
    case FormulaKind::Forall: {
      Term e = make_epsilon(a.binder(), Formula::negate(a.body()));
      return {"delta_not_forall", {{Formula::negate(open_binder(a, e))}}};
    }
    default: break;
  }
  return {"", {}};
}

struct Usage {
  std::set<std::string> keys;
  std::set<int> refs;
};

using NewKeys = std::vector<std::vector<std::string>>;

class Search {
 public:
  Search(const RuleSet& rules, const SearchConfig& cfg, int bound, std::chrono::steady_clock::time_point deadline,
         std::vector<InstEntry>& table, int& next_meta, long& steps)
      : rules_(rules), cfg_(cfg), bound_(bound), deadline_(deadline), table_(table), next_meta_(next_meta),
        steps_(steps) {}

  bool bound_hit() const { return bound_hit_; }

  std::shared_ptr<ProofNode> solve(Branch b) {
    std::vector<std::pair<std::shared_ptr<ProofNode>, NewKeys>> chain;
    std::shared_ptr<ProofNode> tail;
    while (true) {
      tick();
      if (b.closure) {
        tail = std::make_shared<ProofNode>();
        tail->rule = b.closure->rule;
        tail->principals = b.closure->principals;
        tail = prune(tail, {});
        break;
      }
      auto step = choose(b);
      if (!step) return nullptr;
      effects(b, *step);
      const SuperRule* rule = step->rule;
      auto node = std::make_shared<ProofNode>(std::move(step->node));
      std::size_t n = node->branches.size();
      NewKeys nk(n);
      if (n == 0) {
        tail = prune(node, nk);
        break;
      }
      if (n == 1) {
        for (const auto& f : node->branches[0])
          if (b.add(f)) {
            nk[0].push_back(f.key());
            if (rule) b.origin[f.key()] = rule;
          }
        chain.emplace_back(node, std::move(nk));
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) {
        Branch c = i + 1 == n ? std::move(b) : b;
        for (const auto& f : node->branches[i])
          if (c.add(f)) {
            nk[i].push_back(f.key());
            if (rule) c.origin[f.key()] = rule;
          }
        auto child = solve(std::move(c));
        if (!child) return nullptr;
        // A closed child that ignores this node's output makes its siblings moot.
        if (!depends(*node, child, nk[i])) {
          tail = child;
          break;
        }
        node->children.push_back(child);
      }
      if (!tail) tail = prune(node, nk);
      break;
    }
    for (std::size_t k = chain.size(); k-- > 0;) {
      chain[k].first->children = {tail};
      tail = prune(chain[k].first, chain[k].second);
    }
    return tail;
  }

 private:
  void tick() {
    if (++steps_ > cfg_.step_budget) throw Abort{false};
    if ((steps_ & 255) == 0 && std::chrono::steady_clock::now() > deadline_) throw Abort{true};
  }

  bool depends(const ProofNode& node, const std::shared_ptr<ProofNode>& child, const std::vector<std::string>& keys) {
    const Usage& u = usage_.at(child.get());
    if (node.ref >= 0 && u.refs.count(node.ref)) return true;
    for (const auto& k : keys)
      if (u.keys.count(k)) return true;
    return false;
  }

  // Replaces a node by a child whose subtree does not depend on it.
  std::shared_ptr<ProofNode> prune(const std::shared_ptr<ProofNode>& node, const NewKeys& nk) {
    for (std::size_t i = 0; i < node->children.size(); ++i)
      if (!depends(*node, node->children[i], nk[i])) return node->children[i];
    Usage u;
    for (const auto& ch : node->children) {
      const Usage& cu = usage_.at(ch.get());
      u.keys.insert(cu.keys.begin(), cu.keys.end());
      u.refs.insert(cu.refs.begin(), cu.refs.end());
    }
    for (const auto& p : node->principals) u.keys.insert(p.key());
    if (node->prior >= 0) u.refs.insert(node->prior);
    usage_[node.get()] = std::move(u);
    return node;
  }

  void effects(Branch& b, const Step& s) {
    if (!s.expand.empty()) b.expanded.insert(s.expand);
    if (!s.done.empty()) b.done.insert(s.done);
    if (!s.count.empty()) ++b.counts[s.count];
    for (const auto& [id, link] : s.links) b.links[id] = link;
  }

  const Plan& plan(const Formula& f) {
    auto it = plans_.find(f.key());
    if (it != plans_.end()) return it->second;
    return plans_.emplace(f.key(), make_plan(f, rules_)).first->second;
  }

  std::optional<Step> choose(Branch& b) {
    if (auto s = analytic(b)) return s;
    if (auto s = instantiation(b)) return s;
    if (auto s = gamma_m(b)) return s;
    return relational(b);
  }

  // A rule is not applied again to its own output (star rules reproduce their premise).
  static bool blocked(const Branch& b, const Formula& f, const Plan& p) {
    if (!p.rule) return false;
    auto it = b.origin.find(f.key());
    return it != b.origin.end() && it->second == p.rule;
  }

  static int rank(RuleClass c) {
    switch (c) {
      case RuleClass::Closure: return 0;
      case RuleClass::Alpha: return 1;
      case RuleClass::Delta: return 2;
      case RuleClass::Beta: return 3;
      case RuleClass::Gamma: return 4;
    }
    return 4;
  }

  std::optional<Step> analytic(Branch& b) {
    int best = -1, best_rank = 99;
    for (std::size_t i = 0; i < b.formulas.size(); ++i) {
      const Formula& f = b.formulas[i];
      if (b.expanded.count(f.key())) continue;
      const Plan& p = plan(f);
      if (p.kind == PlanKind::None || p.kind == PlanKind::EqRule || p.kind == PlanKind::GammaCore) continue;
      if (p.klass == RuleClass::Gamma || blocked(b, f, p)) continue;
      int r = rank(p.klass);
      if (r < best_rank) {
        best_rank = r;
        best = static_cast<int>(i);
        if (r == 0) break;
      }
    }
    if (best < 0) return std::nullopt;
    Formula f = b.formulas[best];
    return apply_plan(f, plan(f));
  }

  Term fresh(const std::string& name) { return Term::meta(next_meta_++, name); }

  Step apply_plan(const Formula& f, const Plan& p) {
    Step s;
    s.expand = f.key();
    s.node.principals = {f};
    switch (p.kind) {
      case PlanKind::Core: {
        auto [name, bs] = core_expand(f);
        s.node.rule = name;
        s.node.branches = std::move(bs);
        break;
      }
      case PlanKind::Schema:
        s.node.rule = p.schema->name;
        s.node.branches = *p.schema->apply(f);
        break;
      case PlanKind::Fun: {
        const Formula& a = f.operand();
        s.node.rule = "fun";
        for (std::size_t i = 0; i < a.args()[0].args().size(); ++i)
          s.node.branches.push_back({neq(a.args()[0].args()[i], a.args()[1].args()[i])});
        break;
      }
      case PlanKind::GammaCore: {
        bool negative = f.is(FormulaKind::Not);
        const Formula& q = negative ? f.operand() : f;
        Term m = fresh(upper_name(q.binder()));
        Formula out = open_binder(q, m);
        s.node.rule = negative ? "gamma_not_exists_m" : "gamma_forall_m";
        s.node.fresh = {m};
        s.node.branches = {{negative ? Formula::negate(out) : out}};
        s.links.push_back({m.meta_id(), MetaLink{f, nullptr, 0, {}, -1, m}});
        break;
      }
      case PlanKind::Rule:
      case PlanKind::EqRule: {
        const SuperRule& r = *p.rule;
        std::map<int, Term> values;
        for (std::size_t j = 0; j < r.metas.size(); ++j) {
          Term m = fresh(r.metas[j].name());
          values[static_cast<int>(j)] = m;
          s.node.fresh.push_back(m);
          s.links.push_back({m.meta_id(), MetaLink{f, &r, static_cast<int>(j), {}, -1, m}});
        }
        s.node.rule = r.name;
        s.rule = &r;
        s.node.branches = instantiate(r, p.params, values);
        break;
      }
      case PlanKind::None: break;
    }
    return s;
  }

  // Every child must bring something new, otherwise the step cannot help.
  static bool progresses(const Branch& b, const Branches& bs) {
    for (const auto& br : bs) {
      bool any = false;
      for (const auto& f : br)
        if (!b.has(f)) {
          any = true;
          break;
        }
      if (!any) return false;
    }
    return true;
  }

  std::optional<Step> inst_step(Branch& b, int meta, const Term& t) {
    auto lit = b.links.find(meta);
    if (lit == b.links.end()) return std::nullopt;
    const MetaLink& link = lit->second;
    const Formula& ante = link.antecedent;
    Step s;
    s.node.principals = {ante};
    if (!link.rule) {
      s.done = "i|" + ante.key() + "|" + t.key();
      if (b.done.count(s.done)) return std::nullopt;
      s.count = ante.key();
      if (b.counts[s.count] >= bound_) {
        bound_hit_ = true;
        return std::nullopt;
      }
      bool negative = ante.is(FormulaKind::Not);
      Formula out = negative ? Formula::negate(open_binder(ante.operand(), t)) : open_binder(ante, t);
      s.node.rule = negative ? "gamma_not_exists_inst" : "gamma_forall_inst";
      s.node.branches = {{out}};
      if (!progresses(b, s.node.branches)) {
        b.done.insert(s.done);
        return std::nullopt;
      }
      s.node.inst = {{to_string(link.self), t}};
      s.node.ref = record(s.node.rule, to_string(link.self), t, -1);
      return s;
    }
    const SuperRule& r = *link.rule;
    std::map<int, Term> fixed = link.fixed;
    fixed[link.local] = t;
    s.done = "v|" + r.name + "|" + ante.key();
    for (const auto& [k, v] : fixed) s.done += "|" + std::to_string(k) + "=" + v.key();
    if (b.done.count(s.done)) return std::nullopt;
    s.count = ante.key() + "#" + std::to_string(link.ref);
    if (b.counts[s.count] >= bound_) {
      bound_hit_ = true;
      return std::nullopt;
    }
    auto params = match(r.conclusion, ante, r.params);
    if (!params) return std::nullopt;
    std::map<int, Term> values = fixed;
    std::set<int> fixed_ids;
    for (const auto& [k, v] : fixed) {
      fixed_ids.insert(k);
      s.node.inst.emplace_back(r.metas[k].name(), v);
    }
    int prior = link.ref;
    int ref = static_cast<int>(table_.size());
    for (std::size_t j = 0; j < r.metas.size(); ++j) {
      if (fixed.count(static_cast<int>(j))) continue;
      Term m = fresh(r.metas[j].name());
      values[static_cast<int>(j)] = m;
      s.node.fresh.push_back(m);
      s.links.push_back({m.meta_id(), MetaLink{ante, &r, static_cast<int>(j), fixed, ref, m}});
    }
    s.node.rule = variant_name(r, fixed_ids);
    s.rule = &r;
    s.node.branches = instantiate(r, *params, values);
    if (!progresses(b, s.node.branches)) {
      b.done.insert(s.done);
      return std::nullopt;
    }
    s.node.ref = record(s.node.rule, r.metas[link.local].name(), t, prior);
    s.node.prior = prior;
    return s;
  }

  int record(const std::string& rule, const std::string& meta, const Term& t, int prior) {
    int ref = static_cast<int>(table_.size());
    table_.push_back({ref, rule, meta, t, prior});
    return ref;
  }

  // ---------------------------------------------------------- instantiation

  struct Candidate {
    int rank;
    std::size_t size;
    int first;
    std::size_t order;
    Substitution s;
  };

  static std::string atom_head(const Formula& a) { return a.name() + "/" + std::to_string(a.args().size()); }

  // Unification that may also step over equations of the branch (a few hops per position).
  static std::optional<Substitution> unify_mod(const Term& x, const Term& y, const Substitution& s,
                                               const std::vector<Formula>& eqs, bool& used, int hops = 3) {
    if (auto u = unify(x, y, s)) return u;
    Term xs = substitute(x, s);
    Term ys = substitute(y, s);
    for (const auto& e : eqs) {
      if (hops == 0) break;
      const Term& l = e.args()[0];
      const Term& r = e.args()[1];
      std::optional<Substitution> u;
      bool dummy = false;
      auto step = [&](const Term& a, const Term& b) { return unify_mod(a, b, s, eqs, dummy, hops - 1); };
      if (l.key() == xs.key()) u = step(r, ys);
      if (!u && r.key() == xs.key()) u = step(l, ys);
      if (!u && l.key() == ys.key()) u = step(xs, r);
      if (!u && r.key() == ys.key()) u = step(xs, l);
      if (u) {
        used = true;
        return u;
      }
    }
    if (!xs.is_app() || !ys.is_app() || xs.name() != ys.name() || xs.args().size() != ys.args().size() ||
        xs.args().empty())
      return std::nullopt;
    Substitution cur = s;
    for (std::size_t i = 0; i < xs.args().size(); ++i) {
      auto u = unify_mod(xs.args()[i], ys.args()[i], cur, eqs, used, hops);
      if (!u) return std::nullopt;
      cur = *u;
    }
    return cur;
  }

  static std::optional<Substitution> bridged(const Formula& p, const Formula& n, const std::vector<Formula>& eqs) {
    Substitution s;
    bool used = false;
    for (std::size_t i = 0; i < p.args().size(); ++i) {
      auto u = unify_mod(p.args()[i], n.args()[i], s, eqs, used);
      if (!u) return std::nullopt;
      s = *u;
    }
    if (!used) return std::nullopt;
    return s;
  }

  std::optional<Step> instantiation(Branch& b) {
    if (b.links.empty()) return std::nullopt;
    std::vector<Formula> pos, neg, eqs;
    for (const auto& f : b.formulas) {
      if (!f.is_literal()) continue;
      if (f.is(FormulaKind::Not)) {
        neg.push_back(f);
      } else {
        pos.push_back(f);
        if (f.is(FormulaKind::Equal)) eqs.push_back(f);
      }
    }
    std::vector<Candidate> cands;
    auto push = [&](int rank, const std::optional<Substitution>& s) {
      if (!s || s->metas.empty()) return;
      cands.push_back({rank, s->metas.size(), s->metas.begin()->first, cands.size(), *s});
    };
    std::unordered_map<std::string, std::vector<const Formula*>> pos_by_head;
    for (const auto& p : pos) pos_by_head[atom_head(p)].push_back(&p);
    for (const auto& nf : neg) {
      const Formula& na = nf.operand();
      if (na.is(FormulaKind::Equal) && nf.has_meta()) {
        push(0, unify(na.args()[0], na.args()[1]));
        bool used = false;
        auto u = unify_mod(na.args()[0], na.args()[1], {}, eqs, used);
        if (used) push(1, u);
      }
      auto it = pos_by_head.find(atom_head(na));
      if (it == pos_by_head.end()) continue;
      for (const Formula* p : it->second) {
        if (!p->has_meta() && !nf.has_meta()) continue;
        push(0, unify(*p, na));
        push(1, bridged(*p, na, eqs));
        if (na.is(FormulaKind::Equal)) {
          Formula flipped = Formula::equal(na.args()[1], na.args()[0]);
          push(0, unify(*p, flipped));
          push(1, bridged(*p, flipped, eqs));
        }
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
      if (x.rank != y.rank) return x.rank < y.rank;
      if (x.size != y.size) return x.size < y.size;
      if (x.first != y.first) return x.first < y.first;
      return x.order < y.order;
    });
    for (const auto& c : cands)
      for (const auto& [id, t] : c.s.metas)
        if (auto st = inst_step(b, id, t)) return st;
    return std::nullopt;
  }

  std::optional<Step> gamma_m(Branch& b) {
    for (std::size_t i = 0; i < b.formulas.size(); ++i) {
      const Formula& f = b.formulas[i];
      if (b.expanded.count(f.key())) continue;
      const Plan& p = plan(f);
      if (blocked(b, f, p)) continue;
      if (p.kind == PlanKind::GammaCore || (p.kind == PlanKind::Rule && p.klass == RuleClass::Gamma)) {
        Formula g = f;
        return apply_plan(g, p);
      }
    }
    return std::nullopt;
  }

  // ---------------------------------------------------------- relational rules

  // Equal, equated on the branch, or the same functor over linked arguments.
  // x and y are equal up to congruence and a few equation hops of the branch.
  static bool linked(const Term& x, const Term& y, const std::vector<Formula>& eqs, int hops = 3) {
    if (x.key() == y.key()) return true;
    if (x.is_app() && y.is_app() && x.name() == y.name() && x.args().size() == y.args().size() &&
        !x.args().empty()) {
      bool all = true;
      for (std::size_t i = 0; i < x.args().size() && all; ++i) all = linked(x.args()[i], y.args()[i], eqs, hops);
      if (all) return true;
    }
    if (hops == 0) return false;
    for (const auto& e : eqs) {
      const Term& l = e.args()[0];
      const Term& r = e.args()[1];
      if (l.key() == x.key() && linked(r, y, eqs, hops - 1)) return true;
      if (r.key() == x.key() && linked(l, y, eqs, hops - 1)) return true;
      if (l.key() == y.key() && linked(x, r, eqs, hops - 1)) return true;
      if (r.key() == y.key() && linked(x, l, eqs, hops - 1)) return true;
    }
    return false;
  }

  // sym, not_refl, trans, transsym, transeq, transeqsym over meta-free
  // literals; equality counts as a reflexive, symmetric, transitive relation.
  // Pairs are only tried when they share a term at the rule's junction.
  std::optional<Step> relation_rules(Branch& b, const std::vector<Formula>& pos, const std::vector<Formula>& neg,
                                     const std::vector<Formula>& eqs, const std::vector<Formula>& neqs) {
    auto R = [](const std::string& r, const Term& x, const Term& y) {
      return r == "=" ? Formula::equal(x, y) : Formula::atom(r, {x, y});
    };
    auto nR = [&](const std::string& r, const Term& x, const Term& y) { return Formula::negate(R(r, x, y)); };
    auto attempt = [&](const char* name, std::vector<Formula> ps, Branches bs) -> std::optional<Step> {
      std::string sig = name;
      for (const auto& p : ps) sig += "|" + p.key();
      if (b.done.count(sig)) return std::nullopt;
      for (auto& br : bs) {
        std::unordered_set<std::string> seen;
        std::erase_if(br, [&](const Formula& f) { return !seen.insert(f.key()).second; });
      }
      Step st;
      st.done = sig;
      st.node.rule = name;
      st.node.principals = std::move(ps);
      st.node.branches = std::move(bs);
      if (progresses(b, st.node.branches)) return st;
      b.done.insert(sig);
      return std::nullopt;
    };
    auto binary = [](const Formula& a) { return a.args().size() == 2; };
    std::vector<Formula> P, N;
    for (const auto& f : pos)
      if (binary(f)) P.push_back(f);
    for (const auto& f : neg)
      if (binary(f.operand())) N.push_back(f);
    P.insert(P.end(), eqs.begin(), eqs.end());
    N.insert(N.end(), neqs.begin(), neqs.end());
    const RelationTable& rel = *b.rel;
    for (const auto& nf : N) {
      const Formula& na = nf.operand();
      const std::string& r = na.name();
      PredicateInfo info = relation_info(rel, r);
      const Term& u = na.args()[0];
      const Term& v = na.args()[1];
      auto same = [](const Term& x, const Term& y) { return x.key() == y.key(); };
      if (r != "=" && info.reflexive && !same(u, v))
        if (auto st = attempt("not_refl", {nf}, {{neq(u, v)}})) return st;
      for (const auto& pf : P) {
        if (pf.name() != r) continue;
        const Term& s0 = pf.args()[0];
        const Term& t0 = pf.args()[1];
        if (r != "=" && info.symmetric && (same(t0, u) || same(s0, v)))
          if (auto st = attempt("sym", {pf, nf}, {{neq(t0, u)}, {neq(s0, v)}})) return st;
        if (info.transitive && (same(s0, u) || same(t0, v)))
          if (auto st = attempt("trans", {pf, nf}, {{neq(u, s0), nR(r, u, s0)}, {neq(t0, v), nR(r, t0, v)}})) return st;
        if (info.transitive && info.symmetric && (same(s0, v) || same(t0, u)))
          if (auto st = attempt("transsym", {pf, nf}, {{neq(v, s0), nR(r, v, s0)}, {neq(t0, u), nR(r, t0, u)}}))
            return st;
      }
      if (r == "=" || !info.transitive) continue;
      for (const auto& e : eqs) {
        const Term& s0 = e.args()[0];
        const Term& t0 = e.args()[1];
        if (!same(s0, u) && !same(s0, v) && !same(t0, u) && !same(t0, v)) continue;
        if (auto st = attempt("transeq", {e, nf},
                              {{neq(u, s0), nR(r, u, s0)}, {nR(r, u, s0), nR(r, t0, v)}, {neq(t0, v), nR(r, t0, v)}}))
          return st;
        if (info.symmetric)
          if (auto st = attempt("transeqsym", {e, nf},
                                {{neq(v, s0), nR(r, v, s0)}, {nR(r, v, s0), nR(r, t0, u)}, {neq(t0, u), nR(r, t0, u)}}))
            return st;
      }
    }
    return std::nullopt;
  }

  std::optional<Step> relational(Branch& b) {
    std::vector<Formula> pos, neg, eqs, neqs;
    for (const auto& f : b.formulas) {
      if (!f.is_literal() || f.has_meta()) continue;
      bool n = f.is(FormulaKind::Not);
      const Formula& a = n ? f.operand() : f;
      if (a.is(FormulaKind::Equal)) {
        (n ? neqs : eqs).push_back(f);
      } else if (!a.args().empty()) {
        (n ? neg : pos).push_back(f);
      }
    }
    for (const auto& nf : neg) {
      const Formula& na = nf.operand();
      for (const auto& pf : pos) {
        if (pf.name() != na.name() || pf.args().size() != na.args().size()) continue;
        std::string sig = "pred|" + pf.key() + "|" + nf.key();
        if (b.done.count(sig)) continue;
        if (pf.name() == "in") {
          bool ok = true;
          for (std::size_t k = 0; k < pf.args().size() && ok; ++k) ok = linked(pf.args()[k], na.args()[k], eqs);
          if (!ok) continue;
        }
        Step s;
        s.done = sig;
        s.node.rule = "pred";
        s.node.principals = {pf, nf};
        for (std::size_t k = 0; k < pf.args().size(); ++k) s.node.branches.push_back({neq(pf.args()[k], na.args()[k])});
        if (progresses(b, s.node.branches)) return s;
        b.done.insert(sig);
      }
    }
    if (auto st = relation_rules(b, pos, neg, eqs, neqs)) return st;
    for (std::size_t i = 0; i < b.formulas.size(); ++i) {
      const Formula& f = b.formulas[i];
      if (b.expanded.count(f.key())) continue;
      const Plan& p = plan(f);
      if (p.kind != PlanKind::EqRule) continue;
      Formula g = f;
      Step s = apply_plan(g, p);
      if (progresses(b, s.node.branches)) return s;
      b.expanded.insert(g.key());
    }
    if (cfg_.cut) return cut(b);
    return std::nullopt;
  }

  std::optional<Step> cut(Branch& b) {
    std::optional<Formula> found;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
      if (found) return;
      if (f.is_atomic()) {
        if (!f.has_meta() && !b.has(f) && !b.has(Formula::negate(f)) && !b.done.count("cut|" + f.key())) found = f;
        return;
      }
      if (f.is(FormulaKind::Not)) return walk(f.operand());
      if (f.is_binary()) {
        walk(f.lhs());
        walk(f.rhs());
      }
    };
    for (const auto& f : b.formulas) {
      if (found) break;
      if (!f.is_literal() && !f.is_quantifier()) walk(f);
    }
    if (!found) return std::nullopt;
    Step s;
    s.done = "cut|" + found->key();
    s.node.rule = "cut";
    s.node.principals = {*found};
    s.node.branches = {{*found}, {Formula::negate(*found)}};
    return s;
  }

  const RuleSet& rules_;
  const SearchConfig& cfg_;
  int bound_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<InstEntry>& table_;
  int& next_meta_;
  long& steps_;
  bool bound_hit_ = false;
  std::unordered_map<std::string, Plan> plans_;
  std::unordered_map<const ProofNode*, Usage> usage_;
};

}  // namespace

ProofResult prove(const std::vector<Formula>& inputs, const RuleSet& rules, const SearchConfig& cfg) {
  ProofResult res;
  res.proof.inputs = inputs;
  res.proof.rules_id = rules.fingerprint();
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::microseconds(static_cast<long long>(cfg.timeout_s * 1e6));
  int max_depth = std::max(1, cfg.max_depth);
  const RelationTable relations = relation_properties(inputs);
  for (int bound = 1;; bound = std::min(bound * 2, max_depth)) {
    res.bound = bound;
    res.table.clear();
    int next_meta = 0;
    long steps = 0;
    Search search(rules, cfg, bound, deadline, res.table, next_meta, steps);
    Branch root;
    root.rel = &relations;
    for (const auto& f : inputs) root.add(f);
    bool budget_out = false;
    try {
      auto node = search.solve(std::move(root));
      res.steps += steps;
      if (node) {
        res.status = ProofStatus::Theorem;
        res.proof.root = node;
        return res;
      }
    } catch (const Abort& a) {
      res.steps += steps;
      if (a.timeout) {
        res.status = ProofStatus::Timeout;
        return res;
      }
      budget_out = true;
    }
    // A larger bound only helps if this one refused an instantiation.
    if (bound >= max_depth || (!budget_out && !search.bound_hit())) break;
  }
  res.status = ProofStatus::Exhausted;
  return res;
}

}  // namespace supded
