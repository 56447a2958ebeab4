#pragma once

// Independent replay of proof traces. Shares only the logic, unification and
// rule-set layers with the prover; the search engine is not linked in here.

#include <string>

#include "supded/rules.hpp"
#include "supded/trace.hpp"

namespace supded {

enum class CheckError {
  None,
  Malformed,  // a formula or term text does not parse, or a witness is out of scope
  RuleSetMismatch,
  ProblemMismatch,
  UnknownRule,
  PrincipalMissing,
  BranchMismatch,
  BadClosure,
  BadInstantiationOrder,
};

const char* to_string(CheckError e);

struct CheckVerdict {
  bool accepted = false;
  int node = -1;  // first failing node, -1 for trace-level failures
  CheckError error = CheckError::None;
  std::string detail;
};

CheckVerdict check_proof(const ProofTrace& t, const RuleSet& rules);

}  // namespace supded
