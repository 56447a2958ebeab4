#include <gtest/gtest.h>

#include "support.hpp"
#include "supded/analyzer.hpp"
#include "supded/compiler.hpp"
#include "supded/theory_file.hpp"
#include "supded/unify.hpp"

using namespace supded;
using supded::testing::F;

TEST(Analyzer, Classification) {
  EXPECT_EQ(classify_axiom(F("![A,B]: (subseteq(A,B) <=> ![X]: (in(X,A) => in(X,B)))")), AxiomForm::Equiv);
  EXPECT_EQ(classify_axiom(F("![X]: (p(X) => q(X))")), AxiomForm::AtomImpAtom);
  EXPECT_EQ(classify_axiom(F("![X]: (p(X) => (q(X) | r(X)))")), AxiomForm::AtomImpAny);
  EXPECT_EQ(classify_axiom(F("![X]: ((q(X) & r(X)) => p(X))")), AxiomForm::AnyImpAtom);
  EXPECT_EQ(classify_axiom(F("![X]: p(X,X)")), AxiomForm::UniversalAtom);
  EXPECT_EQ(classify_axiom(F("![X]: (p(X) | q(X))")), AxiomForm::NotCompilable);
  EXPECT_EQ(classify_axiom(F("?[X]: p(X)")), AxiomForm::NotCompilable);
}

TEST(Analyzer, AtomImpAtomGivesContrapositivePair) {
  Formula f = F("![X]: (p(X) => q(X))");
  auto rs = rules_for("pq", f, classify_axiom(f));
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(to_string(rs[0].lhs), "p(X)");
  EXPECT_EQ(to_string(rs[0].rhs), "q(X)");
  EXPECT_EQ(to_string(rs[1].lhs), "~q(X)");
  EXPECT_EQ(to_string(rs[1].rhs), "~p(X)");
  EXPECT_TRUE(rs[0].positive_only && rs[1].positive_only);
  EXPECT_EQ(rs[0].converse, rs[1].name);
  EXPECT_EQ(rs[1].converse, rs[0].name);
}

TEST(Analyzer, UniversalAtomClosesBranches) {
  Formula f = F("![X]: p(X,X)");
  auto rs = rules_for("refl", f, classify_axiom(f));
  ASSERT_EQ(rs.size(), 1u);
  RuleSet set = compile_with_extension(rs);
  const SuperRule* r = set.find("refl");
  ASSERT_TRUE(r);
  EXPECT_TRUE(r->closes());
  auto res = prove({F("~p(f(a),f(a))")}, set);
  EXPECT_EQ(res.status, ProofStatus::Theorem);
  EXPECT_EQ(res.nodes(), 1);
}

TEST(Analyzer, EqualityHeadThrows) {
  Formula f = F("![X]: (X = f(X) => q(X))");
  EXPECT_THROW(rules_for("e", f, classify_axiom(f)), EqualityHead);
}

TEST(Analyzer, ExtraVariablesAreQuantified) {
  Formula f = F("![X,Y]: (p(X) => r(X,Y))");
  auto rs = rules_for("pr", f, classify_axiom(f));
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(to_string(rs[0].rhs), "![Y]: r(X,Y)");
  Formula g = F("![X,Y]: ((r(X,Y) & s(Y)) => p(X))");
  auto gs = rules_for("rp", g, classify_axiom(g));
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_EQ(to_string(gs[0].lhs), "~p(X)");
  EXPECT_TRUE(gs[0].rhs.is(FormulaKind::Not) && gs[0].rhs.operand().is(FormulaKind::Exists));
  Formula h = F("![X,Y]: (l(X) <=> (e(X,Y) & n(Y)))");
  EXPECT_TRUE(rules_for("l", h, classify_axiom(h)).empty());
}

TEST(Analyzer, EmptyTheory) {
  AnalysisReport r = analyze_theory({});
  EXPECT_TRUE(r.rules.empty());
  EXPECT_TRUE(r.residual.empty());
  EXPECT_TRUE(r.outcomes.empty());
}

TEST(Analyzer, InclusionAloneGivesOnePair) {
  AnalysisReport r = analyze_theory({{"inc", F("![A,B]: (subseteq(A,B) <=> ![X]: (in(X,A) => in(X,B)))")}});
  ASSERT_EQ(r.rules.size(), 1u);
  EXPECT_FALSE(r.rules[0].positive_only);
  EXPECT_TRUE(r.residual.empty());
  RuleSet rs = compile_with_extension(r.rules);
  EXPECT_TRUE(rs.find("inc") && rs.find("not_inc"));
}

TEST(Analyzer, LaterConflictingAxiomStaysResidual) {
  AnalysisReport r = analyze_theory({{"a", F("![X]: (p(X) <=> q(X))")}, {"b", F("![X]: (p(X) <=> r(X))")}});
  ASSERT_EQ(r.outcomes.size(), 2u);
  EXPECT_EQ(r.outcomes[0].reason, AxiomReason::Compiled);
  EXPECT_EQ(r.outcomes[1].reason, AxiomReason::ConclusionConflict);
  EXPECT_EQ(r.outcomes[1].conflict, "a");
  ASSERT_EQ(r.residual.size(), 1u);
  EXPECT_EQ(r.residual[0].name, "b");
}

TEST(Analyzer, ConflictAgainstSeededRules) {
  std::vector<Prr> seed{make_prr("inc", "subseteq(a,b)", "![X]: (in(X,a) => in(X,b))", {"a", "b"})};
  AnalysisReport r = analyze_theory({{"s", F("![X]: (subseteq(X,X) <=> $true)")}}, seed);
  EXPECT_EQ(r.outcomes[0].reason, AxiomReason::ConclusionConflict);
}

TEST(Analyzer, AcceptedConclusionsNeverUnify) {
  Theory th = load_theory_file(supded::testing::corpus("theories/analyzer10.thy"));
  AnalysisReport r = analyze_theory(th.axioms);
  std::vector<Formula> concl;
  int base = 0;
  for (const auto& p : r.rules) {
    std::vector<Formula> cs{p.lhs};
    if (!p.positive_only) cs.push_back(complement(p.lhs));
    for (const auto& c : cs) {
      Substitution s;
      for (const auto& v : p.params) s.vars[v] = Term::meta(base++, v);
      concl.push_back(substitute(c, s));
    }
  }
  for (std::size_t i = 0; i < concl.size(); ++i)
    for (std::size_t j = i + 1; j < concl.size(); ++j)
      EXPECT_FALSE(unify(concl[i], concl[j])) << to_string(concl[i]) << " / " << to_string(concl[j]);
  // conservation: each axiom is compiled or residual, never both
  std::size_t compiled = 0;
  for (const auto& o : r.outcomes) compiled += o.reason == AxiomReason::Compiled;
  EXPECT_EQ(compiled + r.residual.size(), th.axioms.size());
}

TEST(Analyzer, CompiledEquivalencesRederive) {
  Theory th = load_theory_file(supded::testing::corpus("theories/analyzer10.thy"));
  AnalysisReport r = analyze_theory(th.axioms);
  RuleSet rs = compile_with_extension(r.rules);
  for (std::size_t i = 0; i < th.axioms.size(); ++i) {
    if (r.outcomes[i].reason != AxiomReason::Compiled) continue;
    auto res = prove({Formula::negate(th.axioms[i].formula)}, rs);
    EXPECT_EQ(res.status, ProofStatus::Theorem) << th.axioms[i].name;
  }
}
