#pragma once

// Depth-first free-variable tableau search with superdeduction rules.
//
// Branches are values: a child gets a copy of its parent's state, so a rule
// applied on one branch is never observed by a sibling. Metavariables are
// never substituted in place; instantiating one re-applies the rule that
// minted it, on its antecedent formula, in the current branch.

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supded/proof.hpp"
#include "supded/rules.hpp"

namespace supded {

struct SearchConfig {
  int max_depth = 8;          // largest instantiation bound; bounds run 1, 2, 4, ...
  double timeout_s = 10.0;
  bool cut = false;
  long step_budget = 200000;  // rule applications per bound
};

enum class ProofStatus { Theorem, Exhausted, Timeout };
const char* to_string(ProofStatus s);

struct InstEntry {
  int ref = -1;
  std::string rule;
  std::string meta;
  Term term;
  int prior = -1;
};

struct ProofResult {
  ProofStatus status = ProofStatus::Exhausted;
  Proof proof;  // root set only for Theorem
  int bound = 0;
  long steps = 0;
  std::vector<InstEntry> table;
  int nodes() const { return proof.root ? count_nodes(*proof.root) : 0; }
};

// Scheduling class of a formula on a branch; literals take the class of the
// rule or schema that applies to them. Literals nothing applies to are nullopt.
std::optional<RuleClass> classify(const Formula& f, const RuleSet& rules);

// Closure of a formula set by the closure rules, if any.
std::optional<ProofNode> try_close(const std::vector<Formula>& branch);

ProofResult prove(const std::vector<Formula>& inputs, const RuleSet& rules, const SearchConfig& cfg = {});

}  // namespace supded
