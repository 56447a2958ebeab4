#pragma once

// Glue between theories, problems, the search and the checker; shared by the
// CLI, the benchmarks and the acceptance tests.

#include <string>
#include <vector>

#include "supded/analyzer.hpp"
#include "supded/engine.hpp"
#include "supded/tptp.hpp"

namespace supded {

// Theory sources:
//   b-set   the bundled B pack
//   axioms  the problem's own axioms, through the theory analyzer
//   none    no rewrite rules (schemas only)
//   <path>  a theory file (its axioms go through the analyzer)
struct LoadedTheory {
  RuleSet rules;
  std::vector<Formula> residual;  // extra branch formulas
  AnalysisReport report;
};

// `problem_axioms` is only read for the "axioms" source.
LoadedTheory load_theory(const std::string& source, bool super, const std::vector<NamedFormula>& problem_axioms = {});

enum class RunStatus { Theorem, GaveUp, Timeout, Error };
const char* to_string(RunStatus s);

struct RunConfig {
  std::string theory = "axioms";
  bool super = true;
  SearchConfig search;
  bool check = false;
  std::string trace_path;  // written for Theorem results when set
  std::string include_dir;
};

struct RunResult {
  std::string problem;
  std::string mode;  // super | unfold
  RunStatus status = RunStatus::Error;
  double ms = 0;
  int nodes = 0;
  std::string trace;
  std::string message;  // error text, or the checker verdict on rejection
};

// Problem formulas split by role: what "axioms" would compile, and the rest.
struct Obligation {
  std::vector<NamedFormula> axioms;
  std::vector<Formula> goals;  // negated conjecture and negated_conjecture roles
};
Obligation split_obligation(const TptpProblem& p);

RunResult run_problem(const std::string& path, const RunConfig& cfg);
// Runs prepared inputs against prepared rules (traces and checks as in cfg).
RunResult run_inputs(const std::string& id, const std::vector<Formula>& inputs, const RuleSet& rules,
                     const RunConfig& cfg);

std::string csv_header();
std::string csv_row(const RunResult& r);

// Every *.p file of `dir` (sorted) under super then unfold mode. When
// `trace_dir` is set, Theorem traces go to <trace_dir>/<stem>.<mode>.sdt.
std::vector<RunResult> bench(const std::string& dir, const RunConfig& cfg, int jobs = 1,
                             const std::string& trace_dir = "");

}  // namespace supded
