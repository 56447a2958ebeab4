#pragma once

// Bundled B set theory: rewrite rules, relation star rules, golden tables.
//
// Vocabulary: membership is in/2; pair/2, prod/2 (cartesian product),
// pow/1, subseteq/2, subset/2, union/2, inter/2, diff/2, empty/0, big/0,
// enum/n, rel/2, inv/1, dom/1, ran/1, comp/2 (a;b), circ/2, id/1, dres/2,
// rres/2, dsub/2, rsub/2, image/2 (a[b]), ovr/2, dprod/2, prj1/2, prj2/2,
// par/2, pfun/2.

#include <string>
#include <vector>

#include "supded/rules.hpp"

namespace supded {

// Axioms and construct definitions, dependency ordered (no star rules).
std::vector<Prr> b_rewrite_rules();
// x in F -> exists y,z (x = (y,z) & (y,z) in F) for the product and every relation construct.
std::vector<Prr> star_rules();
// Both lists merged in compilation order: each star rule follows its construct.
std::vector<Prr> b_pack();

enum class BMode { Super, Unfold };
// Compiled (or unfolded) B rule set including the schemas. Cached per mode.
const RuleSet& b_rules(BMode mode);
RuleSet build_b_rules(BMode mode);

struct GoldenRule {
  std::string name;
  std::vector<std::string> branches;  // one string per branch, formulas separated by ';'
  int epsilons = 0;
  int metas = 0;
};

const std::vector<GoldenRule>& golden_table();

struct GoldenMismatch {
  std::string rule;
  std::string reason;
};

struct GoldenReport {
  int checked = 0;
  std::vector<GoldenMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

GoldenReport verify_against_golden(const RuleSet& rules);

// Rewrites branch order (and formula order) of golden-covered rules to the
// order of the table. Rules that do not match are left untouched.
void apply_golden_order(RuleSet& rules);

// Construct definitions E == F read off the rewrite rules, with pattern
// variables turned into constants. `typing` holds the B typing facts the
// identity depends on (ovr only: its definition is a union, which does not
// force the members of its right operand to be pairs).
struct BConstruct {
  std::string name;
  Term defined;
  Term definition;
  std::vector<Formula> typing;
};
std::vector<BConstruct> b_constructs();

// Closed instance of a rewrite rule: pattern variables become constants.
std::pair<Formula, Formula> ground_instance(const Prr& p);

}  // namespace supded
