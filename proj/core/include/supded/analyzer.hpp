#pragma once

// Turns first-order axioms into proposition rewrite rules where their shape
// allows it; everything else stays a residual axiom for the tableau.

#include <stdexcept>
#include <string>
#include <vector>

#include "supded/rules.hpp"

namespace supded {

struct NamedFormula {
  std::string name;
  Formula formula;
};

enum class AxiomForm { Equiv, AtomImpAtom, AtomImpAny, AnyImpAtom, UniversalAtom, NotCompilable };
const char* to_string(AxiomForm f);

enum class AxiomReason { Compiled, EqualityHead, ConclusionConflict, NotCompilable };
const char* to_string(AxiomReason r);

// Shape of the axiom after its universal prefix. Equiv also covers phi <=> P.
AxiomForm classify_axiom(const Formula& f);

class EqualityHead : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rules for one axiom (names derived from `name`). Throws EqualityHead when
// the atom a rule would rewrite is an equality; returns {} when the variables
// do not allow a rule (e.g. phi mentions a variable P does not bind).
//   Equiv          P <=> phi   ->  name: P -> phi, both polarities
//   AtomImpAtom    P => Q      ->  name: P -> Q and name_contra: ~Q -> ~P (converses of each other)
//   AtomImpAny     P => phi    ->  name: P -> phi
//   AnyImpAtom     phi => P    ->  name: ~P -> ~phi
//   UniversalAtom  P           ->  name: ~P -> $false
std::vector<Prr> rules_for(const std::string& name, const Formula& f, AxiomForm form);

struct AxiomOutcome {
  std::string name;
  AxiomForm form = AxiomForm::NotCompilable;
  AxiomReason reason = AxiomReason::NotCompilable;
  std::vector<std::string> rules;  // generated rule names when compiled
  std::string conflict;            // earlier rule the conclusion unified with
};

struct AnalysisReport {
  std::vector<Prr> rules;
  std::vector<NamedFormula> residual;
  std::vector<AxiomOutcome> outcomes;  // one per input axiom, input order

  std::string describe() const;
};

// First come, first served: a rule whose conclusion unifies with the
// conclusion of an accepted rule (including `accepted`) leaves its whole axiom
// residual.
AnalysisReport analyze_theory(const std::vector<NamedFormula>& axioms, const std::vector<Prr>& accepted = {});

}  // namespace supded
