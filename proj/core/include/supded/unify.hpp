#pragma once

// Substitution, alpha-equivalence, unification over metavariables and
// one-way matching of rule patterns.

#include <map>
#include <optional>
#include <set>
#include <string>

#include "supded/logic.hpp"

namespace supded {

struct Substitution {
  std::map<std::string, Term> vars;
  std::map<int, Term> metas;

  bool empty() const { return vars.empty() && metas.empty(); }
};

// Capture-avoiding: binders that would capture a free variable of the range are primed.
Term substitute(const Term& t, const Substitution& s);
Formula substitute(const Formula& f, const Substitution& s);

bool alpha_equal(const Term& a, const Term& b);
bool alpha_equal(const Formula& a, const Formula& b);

// Most general unifier treating only metavariables as unknowns. The result is
// idempotent. `start` is extended, never mutated.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& start = {});
std::optional<Substitution> unify(const Formula& a, const Formula& b, const Substitution& start = {});

// Matches `pattern` onto `target`, binding only the free variables listed in
// `params`. Metavariables and other free variables must agree exactly.
std::optional<Substitution> match(const Term& pattern, const Term& target, const std::set<std::string>& params,
                                  const Substitution& start = {});
std::optional<Substitution> match(const Formula& pattern, const Formula& target,
                                  const std::set<std::string>& params, const Substitution& start = {});

// Replaces every occurrence of the subterm `from` (compared by key) with `to`.
Term replace_term(const Term& t, const Term& from, const Term& to);
Formula replace_term(const Formula& f, const Term& from, const Term& to);

Term make_epsilon(const std::string& x, const Formula& body);

}  // namespace supded
