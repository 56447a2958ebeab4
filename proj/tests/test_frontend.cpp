#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "supded/theory_file.hpp"
#include "supded/tptp.hpp"
#include "supded/unify.hpp"

using namespace supded;
using supded::testing::F;
namespace fs = std::filesystem;

namespace {

IncludeResolver table(std::map<std::string, std::string> files) {
  return [files](const std::string& n) -> std::optional<std::pair<std::string, std::string>> {
    auto it = files.find(n);
    if (it == files.end()) return std::nullopt;
    return std::pair{n, it->second};
  };
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("supded_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& rel, const std::string& text) const {
    fs::create_directories((path / rel).parent_path());
    std::ofstream(path / rel) << text;
  }
};

}  // namespace

TEST(Tptp, AxiomAndConjecture) {
  auto p = parse_problem("fof(a1, axiom, ![X]: (p(X) => q(X))).\nfof(c, conjecture, p(a)).");
  ASSERT_EQ(p.formulas.size(), 2u);
  EXPECT_EQ(p.formulas[0].role, TptpRole::Axiom);
  EXPECT_EQ(p.formulas[0].formula.key(), F("![X]: (p(X) => q(X))").key());
  EXPECT_EQ(p.formulas[1].role, TptpRole::Conjecture);
  EXPECT_EQ(p.formulas[1].name, "c");
}

TEST(Tptp, RejectsOtherDialects) {
  EXPECT_THROW(parse_problem("cnf(a, axiom, p(a) | q)."), SyntaxError);
  EXPECT_THROW(parse_problem("tff(a, axiom, p)."), SyntaxError);
  EXPECT_THROW(parse_problem("thf(a, axiom, p)."), SyntaxError);
  EXPECT_THROW(parse_problem("fof(a, axiom, p(1))."), SyntaxError);
  EXPECT_THROW(parse_problem("fof(a, axiom, $sum(a) = b)."), SyntaxError);
  EXPECT_THROW(parse_problem("fof(a, type, p)."), SyntaxError);
}

TEST(Tptp, SyntaxErrorHasPosition) {
  try {
    parse_problem("fof(a, axiom, p).\nfof(b, axiom, (p & )).");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Tptp, AnnotationsAndComments) {
  auto p = parse_problem(
      "% header\n/* block */ fof(a, axiom, p, file('x.p', a), [status(thm)]).\nfof('quoted name', hypothesis, q).");
  ASSERT_EQ(p.formulas.size(), 2u);
  EXPECT_EQ(p.formulas[1].name, "quoted name");
  EXPECT_EQ(p.formulas[1].role, TptpRole::Hypothesis);
}

TEST(Tptp, Includes) {
  auto r = table({{"Axioms/A.ax", "fof(ax1, axiom, p). fof(ax2, axiom, q)."}});
  auto p = parse_problem("include('Axioms/A.ax').\nfof(c, conjecture, p & q).", r);
  ASSERT_EQ(p.formulas.size(), 3u);
  EXPECT_EQ(p.formulas[0].source, "Axioms/A.ax");
  EXPECT_EQ(p.includes, std::vector<std::string>{"Axioms/A.ax"});
  auto sel = parse_problem("include('Axioms/A.ax', [ax2]).", r);
  ASSERT_EQ(sel.formulas.size(), 1u);
  EXPECT_EQ(sel.formulas[0].name, "ax2");
  EXPECT_THROW(parse_problem("include('missing.ax')."), UnresolvedInclude);
  EXPECT_THROW(parse_problem("include('x.ax').", table({{"x.ax", "include('x.ax')."}})), UnresolvedInclude);
}

TEST(Tptp, IncludeSearchOrder) {
  TempDir d;
  d.write("prob/Axioms/s.ax", "fof(local, axiom, p).");
  d.write("inc/Axioms/s.ax", "fof(shared, axiom, p).");
  d.write("prob/t.p", "include('Axioms/s.ax').\nfof(c, conjecture, p).");
  auto local = load_problem((d.path / "prob/t.p").string());
  EXPECT_EQ(local.formulas[0].name, "local");
  auto shared = load_problem((d.path / "prob/t.p").string(), (d.path / "inc").string());
  EXPECT_EQ(shared.formulas[0].name, "shared");
}

TEST(Tptp, ProofObligation) {
  auto p = parse_problem("fof(a, axiom, p). fof(c, conjecture, q).");
  auto ob = to_proof_obligation(p);
  ASSERT_EQ(ob.size(), 2u);
  EXPECT_EQ(ob[0].key(), F("p").key());
  EXPECT_EQ(ob[1].key(), F("~q").key());
  auto none = to_proof_obligation(parse_problem("fof(a, axiom, p). fof(b, axiom, ~p)."));
  EXPECT_EQ(none.size(), 2u);
  EXPECT_THROW(to_proof_obligation(parse_problem("fof(c1, conjecture, p). fof(c2, conjecture, q).")),
               MultipleConjectures);
  auto neg = to_proof_obligation(parse_problem("fof(a, axiom, p). fof(n, negated_conjecture, ~p)."));
  EXPECT_EQ(neg[1].key(), F("~p").key());
}

TEST(Tptp, RoundTrip) {
  auto p = parse_problem(
      "fof(a, axiom, ![X]: (p(X) <=> ?[Y]: r(X,Y))). fof(b, definition, a != b). fof(c, conjecture, ~(p(a) <~> q)).");
  auto q = parse_problem(print_problem(p));
  ASSERT_EQ(p.formulas.size(), q.formulas.size());
  for (std::size_t i = 0; i < p.formulas.size(); ++i) {
    EXPECT_TRUE(alpha_equal(p.formulas[i].formula, q.formulas[i].formula));
    EXPECT_EQ(p.formulas[i].role, q.formulas[i].role);
  }
}

TEST(TheoryFile, RulesAndAxioms) {
  Theory th = parse_theory(R"(
    % rules
    rule inc: subseteq(A,B) --> ![X]: (in(X,A) => in(X,B)).
    rule tall: giant(X) ==> tall(X).
    axiom le_refl: ![X]: le(X,X).
  )");
  ASSERT_EQ(th.rules.size(), 2u);
  EXPECT_EQ(th.rules[0].params, (std::set<std::string>{"A", "B"}));
  EXPECT_FALSE(th.rules[0].positive_only);
  EXPECT_TRUE(th.rules[1].positive_only);
  ASSERT_EQ(th.axioms.size(), 1u);
  EXPECT_EQ(th.axioms[0].name, "le_refl");
}

TEST(TheoryFile, Errors) {
  EXPECT_THROW(parse_theory("rule r: p(X) --> q(X,Y)."), SyntaxError);   // Y not bound by the lhs
  EXPECT_THROW(parse_theory("rule r: p(X) & q(X) --> r."), SyntaxError);  // lhs not a literal
  EXPECT_THROW(parse_theory("axiom a: p(X)."), SyntaxError);              // open axiom
  EXPECT_THROW(parse_theory("lemma a: p."), SyntaxError);
  EXPECT_THROW(parse_theory("rule r: p --> q. rule r: q --> p."), SyntaxError);
  EXPECT_THROW(parse_theory("rule r: p -> q."), SyntaxError);
}

TEST(TheoryFile, BundledTheoryLoads) {
  Theory th = load_theory_file(supded::testing::corpus("theories/analyzer10.thy"));
  EXPECT_EQ(th.axioms.size(), 10u);
  EXPECT_TRUE(th.rules.empty());
}
