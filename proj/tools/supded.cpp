// supded: prove, check, compile-rules, analyze, bench.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "supded/checker.hpp"
#include "supded/driver.hpp"
#include "supded/syntax.hpp"
#include "supded/theory_file.hpp"
#include "supded/trace.hpp"

namespace fs = std::filesystem;
using namespace supded;

namespace {

constexpr int kUsage = 64;
constexpr int kInternal = 70;

struct Options {
  std::string input;
  std::string problem;
  RunConfig run;
  std::string stats;
  int jobs = 1;
  std::string trace_dir;
};

void add_theory_flags(CLI::App* c, Options& o) {
  c->add_option("--theory", o.run.theory, "b-set, axioms (the problem's own), none, or a theory file")
      ->capture_default_str();
  c->add_flag("--super,!--no-super", o.run.super, "superdeduction rules (default) or plain unfolding");
  c->add_option("--include-dir", o.run.include_dir, "directory searched first for TPTP includes");
}

void add_search_flags(CLI::App* c, Options& o) {
  c->add_option("--timeout", o.run.search.timeout_s, "seconds per problem")->capture_default_str();
  c->add_option("--max-depth", o.run.search.max_depth, "largest instantiation bound (bounds 1,2,4,..)")
      ->capture_default_str();
  c->add_flag("--cut", o.run.search.cut, "enable the cut rule");
  c->add_flag("--check", o.run.check, "replay every proof through the checker before reporting it");
  c->add_option("--stats", o.stats, "append a CSV row (problem,mode,status,ms,nodes,trace)");
}

void append_stats(const std::string& path, const std::vector<RunResult>& rows) {
  bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (fresh) out << csv_header() << "\n";
  for (const auto& r : rows) out << csv_row(r) << "\n";
  if (!out) throw std::runtime_error("cannot write " + path);
}

int bench_dir(const Options& o) {
  auto rows = bench(o.input, o.run, o.jobs, o.trace_dir);
  if (o.stats.empty()) {
    std::cout << csv_header() << "\n";
    for (const auto& r : rows) std::cout << csv_row(r) << "\n";
  } else {
    if (fs::exists(o.stats)) fs::remove(o.stats);
    append_stats(o.stats, rows);
  }
  for (const auto& r : rows)
    if (r.status == RunStatus::Error) std::cerr << r.problem << " (" << r.mode << "): " << r.message << "\n";
  return 0;
}

int prove_cmd(const Options& o) {
  if (fs::is_directory(o.input)) return bench_dir(o);
  RunResult r = run_problem(o.input, o.run);
  std::cout << "% SZS status " << to_string(r.status) << " for " << r.problem << "\n";
  if (r.status == RunStatus::Theorem)
    std::cout << "% nodes " << r.nodes << ", " << static_cast<long>(r.ms) << " ms, mode " << r.mode << "\n";
  if (!r.trace.empty()) std::cout << "% trace " << r.trace << "\n";
  if (!r.message.empty()) std::cerr << r.message << "\n";
  if (!o.stats.empty()) append_stats(o.stats, {r});
  if (r.message.rfind("checker rejected", 0) == 0) return kInternal;
  switch (r.status) {
    case RunStatus::Theorem: return 0;
    case RunStatus::GaveUp:
    case RunStatus::Timeout: return 1;
    case RunStatus::Error: return 2;
  }
  return kInternal;
}

LoadedTheory theory_for(const Options& o) {
  if (o.run.theory != "axioms") return load_theory(o.run.theory, o.run.super);
  if (o.problem.empty()) throw CLI::ValidationError("--problem", "required with --theory axioms");
  return load_theory("axioms", o.run.super, split_obligation(load_problem(o.problem, o.run.include_dir)).axioms);
}

int check_cmd(const Options& o) {
  std::ifstream in(o.input);
  if (!in) {
    std::cerr << "cannot read " << o.input << "\n";
    return 2;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  ProofTrace t;
  try {
    t = read_trace(ss.str());
  } catch (const TraceError& e) {
    std::cout << "malformed: " << e.what() << "\n";
    return 2;
  }
  LoadedTheory th = theory_for(o);
  CheckVerdict v = check_proof(t, th.rules);
  if (v.accepted) {
    std::cout << "accepted (" << t.nodes.size() << " nodes)\n";
    return 0;
  }
  std::cout << "rejected at node " << v.node << ": " << to_string(v.error);
  if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
  std::cout << "\n";
  return v.error == CheckError::Malformed ? 2 : 1;
}

int compile_cmd(const Options& o) {
  LoadedTheory th = theory_for(o);
  std::cout << "% " << th.rules.fingerprint() << "\n" << th.rules.describe();
  for (const auto& f : th.residual) std::cout << "residual " << to_string(f) << "\n";
  return 0;
}

int analyze_cmd(const Options& o) {
  AnalysisReport rep;
  if (fs::path(o.input).extension() == ".p") {
    rep = analyze_theory(split_obligation(load_problem(o.input, o.run.include_dir)).axioms);
  } else {
    Theory th = load_theory_file(o.input);
    rep = analyze_theory(th.axioms, th.rules);
  }
  std::cout << rep.describe();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superdeduction tableau prover"};
  app.require_subcommand(1);
  Options o;

  auto* prove = app.add_subcommand("prove", "prove a TPTP problem, or every *.p of a directory under both modes");
  prove->add_option("problem", o.input, "problem file or directory")->required();
  add_theory_flags(prove, o);
  add_search_flags(prove, o);
  prove->add_option("--trace", o.run.trace_path, "write the proof trace here");
  prove->add_option("--trace-dir", o.trace_dir, "batch mode: trace directory");
  prove->add_option("--jobs", o.jobs, "batch mode: problems run concurrently")->check(CLI::PositiveNumber);

  auto* benchc = app.add_subcommand("bench", "run a problem directory under both modes and print CSV");
  benchc->add_option("dir", o.input, "problem directory")->required()->check(CLI::ExistingDirectory);
  add_theory_flags(benchc, o);
  add_search_flags(benchc, o);
  benchc->add_option("--trace-dir", o.trace_dir, "trace directory");
  benchc->add_option("--jobs", o.jobs, "problems run concurrently")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "replay a proof trace; exit 0 accepted, 1 rejected, 2 malformed");
  check->add_option("trace", o.input, "trace file")->required();
  add_theory_flags(check, o);
  check->add_option("--problem", o.problem, "problem whose axioms form the theory (--theory axioms)");

  auto* compile = app.add_subcommand("compile-rules", "print the compiled rule set");
  add_theory_flags(compile, o);
  compile->add_option("--problem", o.problem, "problem whose axioms form the theory (--theory axioms)");

  auto* analyze = app.add_subcommand("analyze", "classify the axioms of a theory file or TPTP problem");
  analyze->add_option("theory", o.input, "theory file, or a .p problem")->required()->check(CLI::ExistingFile);
  analyze->add_option("--include-dir", o.run.include_dir, "directory searched first for TPTP includes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*prove) return prove_cmd(o);
    if (*benchc) return bench_dir(o);
    if (*check) return check_cmd(o);
    if (*compile) return compile_cmd(o);
    if (*analyze) return analyze_cmd(o);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "line " << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
