#pragma once

// Closed tableau as produced by the engine and replayed by the checker.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "supded/logic.hpp"

namespace supded {

struct ProofNode {
  std::string rule;
  std::vector<Formula> principals;
  // Variants: rule metavariable name -> term. Core instantiation: metavariable -> term.
  std::vector<std::pair<std::string, Term>> inst;
  std::vector<Term> fresh;  // metavariables minted by this node
  int ref = -1;             // instantiation table entry created here
  int prior = -1;           // entry this variant continues
  std::vector<std::vector<Formula>> branches;  // formulas added on each child branch
  std::vector<std::shared_ptr<ProofNode>> children;
};

struct Proof {
  std::vector<Formula> inputs;
  std::string rules_id;  // RuleSet::fingerprint()
  std::shared_ptr<ProofNode> root;
};

int count_nodes(const ProofNode& n);

}  // namespace supded
