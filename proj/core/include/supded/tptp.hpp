#pragma once

// TPTP FOF problems: fof(name, role, formula). and include('file').

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "supded/logic.hpp"

namespace supded {

enum class TptpRole { Axiom, Hypothesis, Definition, Lemma, Theorem, Conjecture, NegatedConjecture };
const char* to_string(TptpRole r);

struct TptpFormula {
  std::string name;
  TptpRole role = TptpRole::Axiom;
  Formula formula;
  std::string source;  // file the declaration came from ("" for the top-level text)
};

struct TptpProblem {
  std::vector<TptpFormula> formulas;
  std::vector<std::string> includes;  // resolved paths, in order of first inclusion

  std::size_t count(TptpRole r) const;
};

class UnresolvedInclude : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MultipleConjectures : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maps an include name to (resolved path, text), or nullopt when not found.
using IncludeResolver = std::function<std::optional<std::pair<std::string, std::string>>(const std::string&)>;

// Throws SyntaxError (cnf/tff/thf, numbers, malformed input) or UnresolvedInclude.
TptpProblem parse_problem(std::string_view text, const IncludeResolver& resolve = {});
// Reads `path`; includes resolve against `include_dir` first, then the file's directory.
TptpProblem load_problem(const std::string& path, const std::string& include_dir = "");

// Axioms (every non-conjecture role) followed by the negated conjecture.
// Negated conjectures are added as they are.
std::vector<Formula> to_proof_obligation(const TptpProblem& p);

// fof(...) text that parse_problem reads back to alpha-equal formulas.
std::string print_problem(const TptpProblem& p);

}  // namespace supded
