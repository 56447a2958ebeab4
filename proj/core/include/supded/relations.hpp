#pragma once

// Algebraic properties of binary predicates read off the input formulas,
// feeding the relational rules (sym, not_refl, trans, transsym, transeq,
// transeqsym). Equality has every property and is not listed.

#include <map>
#include <string>
#include <vector>

#include "supded/logic.hpp"

namespace supded {

struct PredicateInfo {
  std::string symbol;
  bool reflexive = false;
  bool symmetric = false;
  bool transitive = false;
};

using RelationTable = std::map<std::string, PredicateInfo>;

// Recognizes, up to bound-variable names and with only the universal prefix:
//   ![X]: r(X,X)
//   ![X,Y]: (r(X,Y) => r(Y,X))
//   ![X,Y,Z]: ((r(X,Y) & r(Y,Z)) => r(X,Z))   (also the curried form)
// Top-level conjunctions are searched too.
RelationTable relation_properties(const std::vector<Formula>& axioms);

// Flags of `symbol`; equality is reflexive, symmetric and transitive.
PredicateInfo relation_info(const RelationTable& t, const std::string& symbol);

}  // namespace supded
