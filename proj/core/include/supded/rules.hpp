#pragma once

// Compiled superdeduction rules, hard-coded schemas and rule sets.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "supded/logic.hpp"
#include "supded/unify.hpp"

namespace supded {

enum class RuleClass { Closure, Alpha, Delta, Beta, Gamma };

const char* to_string(RuleClass c);

// R: lhs -> rhs, with lhs a literal over the pattern variables `params`.
struct Prr {
  std::string name;
  Formula lhs;
  Formula rhs;
  std::set<std::string> params;
  bool equality = false;       // extensional equality: never used to extend saturation
  bool positive_only = false;  // only the rule concluding `lhs` is generated
  std::string converse;        // contrapositive partner (implication axioms)
};

// Builds a Prr from text; lower-case names in `params` are pattern variables.
Prr make_prr(const std::string& name, const std::string& lhs, const std::string& rhs,
             const std::set<std::string>& params);

using Branches = std::vector<std::vector<Formula>>;

struct SuperRule {
  std::string name;
  std::string source;  // name of the proposition rewrite rule
  bool negative = false;
  bool equality = false;
  Formula conclusion;
  std::set<std::string> params;
  Branches branches;
  std::vector<Term> metas;     // rule-local metavariables with ids 0..k-1
  std::vector<Term> epsilons;  // introduced epsilon terms, outermost, in order
  std::string converse;        // paired contrapositive rule, if any

  RuleClass klass() const;
  bool closes() const { return branches.empty(); }
};

// Instantiates a rule: params by matching, metas by `meta_values` (local id -> term).
Branches instantiate(const SuperRule& r, const Substitution& params, const std::map<int, Term>& meta_values);

// Name of the variant fixing the given local metavariables, e.g. not_inv_star_YZ.
std::string variant_name(const SuperRule& r, const std::set<int>& fixed);
// Splits a rule or variant name into the rule and its fixed local metavariables.
struct VariantRef {
  const SuperRule* rule = nullptr;
  std::set<int> fixed;
};

// Hard-coded higher-order rules (comprehension, enumerated sets). The
// function returns nullopt when the schema does not apply.
struct Schema {
  std::string name;
  RuleClass klass = RuleClass::Alpha;
  std::function<std::optional<Branches>(const Formula&)> apply;
};

class RuleSet {
 public:
  std::string id;  // mode tag, e.g. "b-set:super"
  std::vector<SuperRule> rules;
  std::vector<Schema> schemas;

  void add(SuperRule r);
  const SuperRule* find(const std::string& name) const;
  std::optional<VariantRef> resolve(const std::string& name) const;
  const Schema* schema(const std::string& name) const;

  // First rule (in order) whose conclusion matches `f`.
  struct Match {
    const SuperRule* rule = nullptr;
    Substitution params;
  };
  std::optional<Match> first_match(const Formula& f, bool include_equality = true) const;
  // First schema applying to `f`.
  std::optional<std::pair<const Schema*, Branches>> first_schema(const Formula& f) const;

  // Identifier bound into traces: id plus a hash of the printed rules.
  std::string fingerprint() const;
  std::string describe() const;

 private:
  std::unordered_map<std::string, std::size_t> by_name_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_head_;
};

std::string head_key(const Formula& literal);

// Comprehension schema over in(t, {[u..]: pat | phi}) and its negation.
Schema comprehension_schema(bool negative);
// Enumerated set schema over in(t, enum(e1..en)) and its negation.
Schema enum_schema(bool negative);
std::vector<Schema> standard_schemas();

std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

}  // namespace supded
