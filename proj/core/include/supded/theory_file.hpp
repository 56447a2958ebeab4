#pragma once

// Theory files: rewrite rules and axioms, one record per statement.
//
//   % comment
//   rule subseteq: subseteq(A,B) --> ![X]: (in(X,A) => in(X,B)).
//   rule tall: giant(X) ==> tall(X).          % positive rule only
//   axiom trans_lt: ![X,Y,Z]: ((lt(X,Y) & lt(Y,Z)) => lt(X,Z)).
//
// Upper-case names free in a rule are its pattern variables; the right-hand
// side may not introduce new ones. Axioms must be closed; they go through the
// theory analyzer.

#include <string>
#include <string_view>
#include <vector>

#include "supded/analyzer.hpp"
#include "supded/rules.hpp"

namespace supded {

struct Theory {
  std::vector<Prr> rules;
  std::vector<NamedFormula> axioms;
};

// Throws SyntaxError.
Theory parse_theory(std::string_view text);
// Throws std::runtime_error when the file cannot be read, SyntaxError otherwise.
Theory load_theory_file(const std::string& path);

}  // namespace supded
