#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"
#include "supded/checker.hpp"
#include "supded/driver.hpp"

using namespace supded;
using supded::testing::F;

namespace {

const RuleSet& bset() { return b_rules(BMode::Super); }

ProofTrace trace_of(const std::vector<std::string>& in, const RuleSet& rs = bset()) {
  std::vector<Formula> fs;
  for (const auto& s : in) fs.push_back(F(s));
  ProofResult r = prove(fs, rs);
  EXPECT_EQ(r.status, ProofStatus::Theorem);
  return emit_trace(r.proof);
}

const char* kInvInv = "~((subseteq(p, prod(a,b)) & in(x,p)) => in(x, inv(inv(p))))";

CheckVerdict recheck(const ProofTrace& t) { return check_proof(read_trace(write_trace(t)), bset()); }

int find(const ProofTrace& t, const std::string& rule) {
  for (const auto& n : t.nodes)
    if (n.rule == rule) return n.id;
  return -1;
}

}  // namespace

TEST(Trace, InclusionTrace) {
  ProofTrace t = trace_of({"~subseteq(a,a)"});
  ASSERT_EQ(t.nodes.size(), 2u);
  EXPECT_EQ(t.witnesses.size(), 1u);
  EXPECT_EQ(t.nodes[1].parent, 0);
  EXPECT_TRUE(t.nodes[1].branches.empty());
  EXPECT_TRUE(check_proof(t, bset()).accepted);
}

TEST(Trace, SingleNodeClosure) {
  ProofTrace t = trace_of({"$false"});
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_EQ(t.nodes[0].rule, "close_bot");
}

TEST(Trace, ByteStableRoundTrip) {
  ProofTrace t = trace_of({kInvInv});
  std::string text = write_trace(t);
  EXPECT_EQ(write_trace(read_trace(text)), text);
  EXPECT_EQ(write_trace(trace_of({kInvInv})), text);
}

TEST(Trace, SameEpsilonOnTwoBranchesGetsTwoNames) {
  ProofTrace t = trace_of({"(p & ~subseteq(a,a)) | (q & ~subseteq(a,a))"});
  ASSERT_EQ(t.witnesses.size(), 2u);
  EXPECT_NE(t.witnesses[0].name, t.witnesses[1].name);
  EXPECT_EQ(t.witnesses[0].term, t.witnesses[1].term);
  EXPECT_NE(t.witnesses[0].node, t.witnesses[1].node);
  EXPECT_TRUE(recheck(t).accepted);
}

TEST(Trace, ReaderRejectsGarbage) {
  EXPECT_THROW(read_trace(""), TraceError);
  EXPECT_THROW(read_trace("supded-trace 2\n(problem \"x\")(rules \"y\")"), TraceError);
  EXPECT_THROW(read_trace("supded-trace 1\n(problem \"x\")(rules \"y\")(node 1 \"close\")"), TraceError);
  EXPECT_THROW(read_trace("supded-trace 1\n(problem \"x\")(rules \"y\")(node 0 \"close\""), TraceError);
  EXPECT_THROW(read_trace("supded-trace 1\n(problem \"x\")(bogus)"), TraceError);
}

TEST(Checker, AcceptsWorkedProofs) {
  EXPECT_TRUE(recheck(trace_of({kInvInv})).accepted);
  EXPECT_TRUE(recheck(trace_of({"~subseteq(inter(a,union(b,c)), union(inter(a,b),inter(a,c)))"})).accepted);
}

TEST(Checker, DeletedBranchFormula) {
  ProofTrace t = trace_of({kInvInv});
  int id = find(t, "alpha_and");
  ASSERT_GE(id, 0);
  t.nodes[id].branches[0].adds.pop_back();
  CheckVerdict v = recheck(t);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.error, CheckError::BranchMismatch);
  EXPECT_EQ(v.node, id);
}

TEST(Checker, VariantBeforeSingleVariable) {
  ProofTrace t = trace_of({kInvInv});
  int yz = find(t, "not_inv_star_YZ");
  ASSERT_GE(yz, 0);
  ASSERT_GE(t.nodes[yz].prior, 0);
  t.nodes[yz].prior = -1;
  CheckVerdict v = recheck(t);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.error, CheckError::BadInstantiationOrder);
  EXPECT_EQ(v.node, yz);

  ProofTrace u = trace_of({kInvInv});
  u.nodes[yz].prior = 99;
  EXPECT_EQ(recheck(u).error, CheckError::BadInstantiationOrder);
}

TEST(Checker, TraceLevelFailures) {
  ProofTrace t = trace_of({"~subseteq(a,a)"});
  EXPECT_EQ(check_proof(t, b_rules(BMode::Unfold)).error, CheckError::RuleSetMismatch);
  ProofTrace p = t;
  p.roots[0] = "~subseteq(b,b)";
  EXPECT_EQ(check_proof(p, bset()).error, CheckError::ProblemMismatch);
  ProofTrace m = t;
  m.nodes[1].principals[0] = "in('$w1',";
  EXPECT_EQ(check_proof(m, bset()).error, CheckError::Malformed);
}

TEST(Checker, NodeLevelFailures) {
  ProofTrace t = trace_of({"~subseteq(a,a)"});
  ProofTrace u = t;
  u.nodes[0].rule = "frobnicate";
  EXPECT_EQ(check_proof(u, bset()).error, CheckError::UnknownRule);
  ProofTrace p = t;
  p.nodes[0].principals[0] = "~subseteq(b,a)";
  EXPECT_EQ(check_proof(p, bset()).error, CheckError::PrincipalMissing);
  ProofTrace c = t;
  c.nodes[1].principals[1] = "in('$w1',a)";
  EXPECT_EQ(check_proof(c, bset()).error, CheckError::BadClosure);
  ProofTrace open = t;
  open.nodes[0].branches[0].child = -1;
  open.nodes.pop_back();
  EXPECT_FALSE(check_proof(open, bset()).accepted);
}

TEST(Checker, CorpusProofsAccepted) {
  for (const auto& e : std::filesystem::directory_iterator(supded::testing::corpus("set"))) {
    for (bool super : {true, false}) {
      RunConfig cfg;
      cfg.theory = "b-set";
      cfg.super = super;
      cfg.check = true;
      RunResult r = run_problem(e.path().string(), cfg);
      EXPECT_EQ(r.status, RunStatus::Theorem) << e.path() << " " << r.mode << " " << r.message;
    }
  }
}
