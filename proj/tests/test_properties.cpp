// Property tests over hand-rolled random generators (fixed seeds).

#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "support.hpp"
#include "supded/analyzer.hpp"
#include "supded/checker.hpp"
#include "supded/driver.hpp"
#include "supded/unify.hpp"

using namespace supded;

namespace {

class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin() { return pick(2) == 0; }

  Term term(int depth, const std::vector<std::string>& vars) {
    int k = pick(depth > 0 ? 4 : 2);
    if (k == 0 && !vars.empty()) return Term::var(vars[pick(static_cast<int>(vars.size()))]);
    if (k <= 1) return Term::constant(std::string(1, "abc"[pick(3)]));
    if (k == 2) return Term::app("f", {term(depth - 1, vars)});
    return Term::app("g", {term(depth - 1, vars), term(depth - 1, vars)});
  }

  Formula formula(int depth, std::vector<std::string> vars, const std::string& prefix = "X") {
    int k = pick(depth > 0 ? 10 : 3);
    switch (k) {
      case 0: return Formula::atom("p", {term(1, vars)});
      case 1: return Formula::atom("q", {term(1, vars), term(1, vars)});
      case 2: return Formula::equal(term(1, vars), term(1, vars));
      case 3: return Formula::negate(formula(depth - 1, vars, prefix));
      case 4: return Formula::conj(formula(depth - 1, vars, prefix), formula(depth - 1, vars, prefix));
      case 5: return Formula::disj(formula(depth - 1, vars, prefix), formula(depth - 1, vars, prefix));
      case 6: return Formula::implies(formula(depth - 1, vars, prefix), formula(depth - 1, vars, prefix));
      case 7: return Formula::iff(formula(depth - 1, vars, prefix), formula(depth - 1, vars, prefix));
      default: {
        std::string x = prefix + std::to_string(vars.size());
        vars.push_back(x);
        Formula body = formula(depth - 1, vars, prefix);
        return k == 8 ? Formula::forall(x, body) : Formula::exists(x, body);
      }
    }
  }

  Formula prop(int depth) {
    int k = pick(depth > 0 ? 8 : 1);
    switch (k) {
      case 0: return Formula::atom(std::string(1, "pqr"[pick(3)]), {});
      case 1: return Formula::negate(prop(depth - 1));
      case 2:
      case 3: return Formula::conj(prop(depth - 1), prop(depth - 1));
      case 4:
      case 5: return Formula::disj(prop(depth - 1), prop(depth - 1));
      case 6: return Formula::implies(prop(depth - 1), prop(depth - 1));
      default: return Formula::iff(prop(depth - 1), prop(depth - 1));
    }
  }

  Term meta_term(int depth) {
    int k = pick(depth > 0 ? 4 : 2);
    if (k == 0) return Term::meta(pick(3), std::string(1, "XYZ"[pick(3)]));
    if (k == 1) return Term::constant(std::string(1, "ab"[pick(2)]));
    if (k == 2) return Term::app("f", {meta_term(depth - 1)});
    return Term::app("g", {meta_term(depth - 1), meta_term(depth - 1)});
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

bool eval(const Formula& f, int valuation) {
  switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: return (valuation >> (f.name()[0] - 'p')) & 1;
    case FormulaKind::Not: return !eval(f.operand(), valuation);
    case FormulaKind::And: return eval(f.lhs(), valuation) && eval(f.rhs(), valuation);
    case FormulaKind::Or: return eval(f.lhs(), valuation) || eval(f.rhs(), valuation);
    case FormulaKind::Implies: return !eval(f.lhs(), valuation) || eval(f.rhs(), valuation);
    case FormulaKind::Iff: return eval(f.lhs(), valuation) == eval(f.rhs(), valuation);
    default: throw std::logic_error("not propositional");
  }
}

bool valid(const Formula& f) {
  for (int v = 0; v < 8; ++v)
    if (!eval(f, v)) return false;
  return true;
}

const RuleSet& none() {
  static const RuleSet rs = load_theory("none", true).rules;
  return rs;
}

}  // namespace

TEST(Property, PrintParseRoundTrip) {
  Gen g(11);
  for (int i = 0; i < 400; ++i) {
    Formula f = g.formula(4, {});
    Formula back = parse_formula(to_string(f));
    ASSERT_EQ(back.key(), f.key()) << to_string(f);
  }
}

TEST(Property, KeysIgnoreBinderNames) {
  for (unsigned seed = 0; seed < 200; ++seed) {
    Gen a(seed), b(seed);
    Formula x = a.formula(4, {}, "X");
    Formula y = b.formula(4, {}, "V");
    ASSERT_EQ(x.key(), y.key()) << to_string(x) << " vs " << to_string(y);
    ASSERT_TRUE(alpha_equal(x, y));
  }
}

TEST(Property, UnifiersUnifyAndAreIdempotent) {
  Gen g(23);
  int found = 0;
  for (int i = 0; i < 2000; ++i) {
    Term s = g.meta_term(3), t = g.meta_term(3);
    auto u = unify(s, t);
    if (!u) continue;
    ++found;
    Term ss = substitute(s, *u);
    ASSERT_EQ(ss.key(), substitute(t, *u).key()) << to_string(s) << " / " << to_string(t);
    ASSERT_EQ(substitute(ss, *u).key(), ss.key());
  }
  EXPECT_GT(found, 100);
}

TEST(Property, MatchIsOneWay) {
  Gen g(5);
  for (int i = 0; i < 500; ++i) {
    Formula pat = g.formula(1, {"X", "Y"});
    std::set<std::string> params = free_vars(pat);
    Substitution inst;
    for (const auto& v : params) inst.vars[v] = g.term(2, {});
    Formula target = substitute(pat, inst);
    auto m = match(pat, target, params);
    ASSERT_TRUE(m) << to_string(pat) << " onto " << to_string(target);
    ASSERT_EQ(substitute(pat, *m).key(), target.key());
  }
}

TEST(Property, PropositionalSoundAndComplete) {
  Gen g(7);
  int theorems = 0;
  for (int i = 0; i < 300; ++i) {
    Formula f = g.prop(4);
    ProofResult r = prove({Formula::negate(f)}, none());
    bool v = valid(f);
    ASSERT_EQ(r.status == ProofStatus::Theorem, v) << to_string(f);
    if (v) {
      ++theorems;
      CheckVerdict c = check_proof(read_trace(write_trace(emit_trace(r.proof))), none());
      ASSERT_TRUE(c.accepted) << to_string(f) << ": " << to_string(c.error) << " " << c.detail;
    }
  }
  EXPECT_GT(theorems, 10);
}

TEST(Property, AnalyzerConservation) {
  Gen g(3);
  for (int round = 0; round < 50; ++round) {
    std::vector<NamedFormula> axioms;
    for (int i = 0; i < 6; ++i) {
      Formula body;
      switch (g.pick(4)) {
        case 0: body = Formula::iff(Formula::atom("p" + std::to_string(g.pick(3)), {Term::var("X")}), g.formula(2, {"X"})); break;
        case 1: body = Formula::implies(Formula::atom("p" + std::to_string(g.pick(3)), {Term::var("X")}), g.formula(2, {"X"})); break;
        case 2: body = Formula::implies(g.formula(2, {"X"}), Formula::atom("p" + std::to_string(g.pick(3)), {Term::var("X")})); break;
        default: body = g.formula(2, {"X"});
      }
      axioms.push_back({"ax" + std::to_string(i), Formula::forall("X", body)});
    }
    AnalysisReport r = analyze_theory(axioms);
    ASSERT_EQ(r.outcomes.size(), axioms.size());
    std::size_t compiled = 0, rules = 0;
    for (const auto& o : r.outcomes) {
      compiled += o.reason == AxiomReason::Compiled;
      rules += o.rules.size();
      ASSERT_EQ(o.reason == AxiomReason::Compiled, !o.rules.empty());
    }
    ASSERT_EQ(compiled + r.residual.size(), axioms.size());
    ASSERT_EQ(rules, r.rules.size());
  }
}

// Single-field mutations of valid traces: the rule name of a node, one added
// formula, or one instantiation term. Every mutant must be rejected.
TEST(Property, MutatedTracesRejected) {
  const RuleSet& rs = b_rules(BMode::Super);
  std::vector<ProofTrace> pool;
  for (const auto& p : b_pack()) {
    ProofResult r = prove({supded::testing::oracle_goal(p)}, rs);
    ASSERT_EQ(r.status, ProofStatus::Theorem);
    pool.push_back(emit_trace(r.proof));
  }
  std::vector<std::string> names;
  for (const auto& t : pool)
    for (const auto& n : t.nodes)
      if (std::find(names.begin(), names.end(), n.rule) == names.end()) names.push_back(n.rule);

  Gen g(2024);
  int done = 0, kinds[3] = {0, 0, 0};
  while (done < 500) {
    int kind = done % 3;
    ProofTrace t = pool[g.pick(static_cast<int>(pool.size()))];
    TraceNode& n = t.nodes[g.pick(static_cast<int>(t.nodes.size()))];
    std::string what;
    if (kind == 0) {
      std::string other = names[g.pick(static_cast<int>(names.size()))];
      if (other == n.rule) continue;
      what = "rule " + n.rule + " -> " + other;
      n.rule = other;
    } else if (kind == 1) {
      std::vector<std::string*> adds;
      for (auto& b : n.branches)
        for (auto& a : b.adds) adds.push_back(&a);
      if (adds.empty()) continue;
      std::string* a = adds[g.pick(static_cast<int>(adds.size()))];
      std::string before = *a;
      *a = g.coin() ? "~(" + *a + ")" : "(" + *a + " & mutant)";
      what = "add " + before + " -> " + *a;
    } else {
      if (n.inst.empty()) continue;
      auto& [name, term] = n.inst[g.pick(static_cast<int>(n.inst.size()))];
      std::string repl = g.coin() ? "mutant" : "f(" + term + ")";
      what = "inst " + name + " " + term + " -> " + repl;
      term = repl;
    }
    ++kinds[kind];
    ++done;
    CheckVerdict v;
    try {
      v = check_proof(read_trace(write_trace(t)), rs);
    } catch (const TraceError&) {
      continue;  // rejected by the reader
    }
    ASSERT_FALSE(v.accepted) << "accepted mutant: " << what;
  }
  EXPECT_EQ(kinds[0] + kinds[1] + kinds[2], 500);
  EXPECT_GT(kinds[2], 100);
}
