#pragma once

// Computation of superdeduction rules from proposition rewrite rules.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "supded/rules.hpp"

namespace supded {

class CyclicDefinition : public std::runtime_error {
 public:
  explicit CyclicDefinition(const std::string& rule)
      : std::runtime_error("saturation does not terminate for rule " + rule), rule_(rule) {}
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

struct CompileOptions {
  bool extension = true;   // apply previously compiled rules during saturation
  bool simplify = true;    // post-saturation clean-up of the branch list
  int step_budget = 20000; // saturation steps per formula
};

// Saturates `f` with closure, analytic and gamma-M rules, the schemas, and
// the rules of `extension` (if any). Returns the open leaves left to right.
// Metavariables are numbered from `next_meta`, which is advanced.
Branches saturate(const Formula& f, const RuleSet* extension, int& next_meta, int step_budget = 20000,
                  const std::string& rule_name = "?");

// Branch-list clean-up used after saturation (epsilon elimination, meta
// specialization, subsumed witnesses, duplicates).
Branches simplify_branches(Branches bs);

struct CompiledPair {
  SuperRule positive;
  std::optional<SuperRule> negative;
};

CompiledPair compile(const Prr& p, const RuleSet* extension, const CompileOptions& opts = {});

// Compiles in order; each non-equality rule joins the saturation set of the
// following ones.
RuleSet compile_with_extension(const std::vector<Prr>& prrs, const CompileOptions& opts = {});

// One-step rules P |- phi and ~P |- ~phi without saturation.
RuleSet unfold_rules(const std::vector<Prr>& prrs);

// Nonempty subsets of the rule's metavariables, smallest first.
std::vector<std::set<int>> variants(const SuperRule& r);

// Rebuilds a rule around a branch list: renumbers metavariables, makes their
// names unique and collects epsilon terms.
SuperRule finish_rule(std::string name, const Prr& p, bool negative, Branches branches);

}  // namespace supded
