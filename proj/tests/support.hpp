#pragma once

#include <string>
#include <vector>

#include "supded/btheory.hpp"
#include "supded/engine.hpp"
#include "supded/syntax.hpp"
#include "supded/trace.hpp"

namespace supded::testing {

inline std::string corpus(const std::string& rel) { return std::string(SUPDED_CORPUS_DIR) + "/" + rel; }

inline Formula F(const std::string& s) { return parse_formula(s); }

// ~(P <=> phi) for a closed instance of a rewrite rule.
inline Formula oracle_goal(const Prr& p) {
  auto [l, r] = ground_instance(p);
  return Formula::negate(Formula::iff(l, r));
}

// Typing facts plus ~(p(E) <=> p(F)) for a construct E == F.
inline std::vector<Formula> construct_goal(const BConstruct& c) {
  std::vector<Formula> in = c.typing;
  in.push_back(Formula::negate(Formula::iff(Formula::atom("p", {c.defined}), Formula::atom("p", {c.definition}))));
  return in;
}

inline std::vector<std::string> rule_names(const ProofTrace& t) {
  std::vector<std::string> out;
  for (const auto& n : t.nodes) out.push_back(n.rule);
  return out;
}

}  // namespace supded::testing
