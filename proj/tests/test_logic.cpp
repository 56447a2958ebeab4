#include <gtest/gtest.h>

#include "support.hpp"
#include "supded/unify.hpp"

using namespace supded;
using supded::testing::F;

TEST(Syntax, PrintsAndRereads) {
  for (const char* s : {"![X]: (p(X) => q(X))", "?[X,Y]: (r(X,Y) & ~(X = Y))", "(a = b) <=> (b = a)",
                        "~(p | (q & $true))", "in(x, {[U,V]: pair(U,V) | r(U,V)})", "q(@[X]: p(X))"}) {
    Formula f = F(s);
    EXPECT_EQ(parse_formula(to_string(f)).key(), f.key()) << s;
  }
}

TEST(Syntax, ConnectivesDesugar) {
  EXPECT_EQ(F("a != b").key(), F("~(a = b)").key());
  EXPECT_EQ(F("p <= q").key(), F("q => p").key());
  EXPECT_EQ(F("p <~> q").key(), F("~(p <=> q)").key());
}

TEST(Syntax, ErrorsCarryPosition) {
  try {
    parse_formula("p(a) &\n  & q");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 0);
  }
  EXPECT_THROW(parse_formula("p(X)"), SyntaxError);  // unbound variable
  EXPECT_THROW(parse_formula("p(1)"), SyntaxError);
  EXPECT_THROW(parse_formula("p($sum)"), SyntaxError);
}

TEST(Syntax, WitnessTable) {
  std::map<std::string, Term> w{{"$w1", parse_term("@[X]: p(X)")}};
  ParseOptions o;
  o.witnesses = &w;
  EXPECT_EQ(parse_formula("q('$w1')", o).key(), F("q(@[X]: p(X))").key());
  EXPECT_THROW(parse_formula("q('$w2')", o), SyntaxError);
}

TEST(Logic, AlphaEquivalentKeysAgree) {
  EXPECT_EQ(F("![X]: p(X)").key(), F("![Y]: p(Y)").key());
  EXPECT_NE(F("![X]: ?[Y]: r(X,Y)").key(), F("![X]: ?[Y]: r(Y,X)").key());
  EXPECT_EQ(parse_term("@[X]: p(X)").key(), parse_term("@[Z]: p(Z)").key());
}

TEST(Logic, Complement) {
  EXPECT_EQ(complement(F("p(a)")).key(), F("~p(a)").key());
  EXPECT_EQ(complement(F("~p(a)")).key(), F("p(a)").key());
}

TEST(Unify, MostGeneralUnifier) {
  Term x = Term::meta(1, "X"), y = Term::meta(2, "Y");
  Term a = Term::constant("a");
  Term l = Term::app("f", {x, Term::app("g", {y})});
  Term r = Term::app("f", {Term::app("g", {a}), Term::app("g", {x})});
  auto s = unify(l, r);
  ASSERT_TRUE(s);
  EXPECT_EQ(substitute(l, *s).key(), substitute(r, *s).key());
  EXPECT_EQ(substitute(y, *s).key(), Term::app("g", {a}).key());
}

TEST(Unify, OccursCheck) {
  Term x = Term::meta(1, "X");
  EXPECT_FALSE(unify(x, Term::app("f", {x})));
  EXPECT_TRUE(unify(x, x));
}

TEST(Unify, ClashFails) {
  EXPECT_FALSE(unify(parse_term("f(a)"), parse_term("g(a)")));
  EXPECT_FALSE(unify(parse_term("f(a)"), parse_term("f(a,a)")));
}

TEST(Unify, MatchBindsOnlyParams) {
  ParseOptions o;
  o.pattern_vars = {"a", "b"};
  Formula pat = parse_formula("subseteq(a,b)", o);
  auto m = match(pat, F("subseteq(s,union(s,t))"), {"a", "b"});
  ASSERT_TRUE(m);
  EXPECT_EQ(m->vars.at("b").key(), parse_term("union(s,t)").key());
  EXPECT_FALSE(match(pat, F("subset(s,t)"), {"a", "b"}));
}

TEST(Unify, SubstitutionAvoidsCapture) {
  ParseOptions o;
  o.free_upper_vars = true;
  Formula g = parse_formula("![Y]: r(X,Y)", o);
  Substitution s;
  s.vars["X"] = Term::var("Y");
  Formula h = substitute(g, s);
  // The free Y must stay free: the result is not alpha-equal to ![Y]: r(Y,Y).
  EXPECT_NE(h.key(), F("![Y]: r(Y,Y)").key());
  EXPECT_TRUE(free_vars(h).count("Y"));
}
