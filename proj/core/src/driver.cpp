#include "supded/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "supded/btheory.hpp"
#include "supded/checker.hpp"
#include "supded/compiler.hpp"
#include "supded/syntax.hpp"
#include "supded/theory_file.hpp"
#include "supded/trace.hpp"

namespace supded {

namespace fs = std::filesystem;

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Theorem: return "Theorem";
    case RunStatus::GaveUp: return "GaveUp";
    case RunStatus::Timeout: return "Timeout";
    case RunStatus::Error: return "Error";
  }
  return "?";
}

namespace {

RuleSet build(const std::vector<Prr>& prrs, bool super, const std::string& tag) {
  RuleSet rs = super ? compile_with_extension(prrs) : unfold_rules(prrs);
  rs.id = tag + (super ? ":super" : ":unfold");
  return rs;
}

}  // namespace

LoadedTheory load_theory(const std::string& source, bool super, const std::vector<NamedFormula>& problem_axioms) {
  LoadedTheory t;
  if (source == "b-set") {
    t.rules = b_rules(super ? BMode::Super : BMode::Unfold);
  } else if (source == "none") {
    t.rules = build({}, super, "none");
  } else if (source == "axioms") {
    t.report = analyze_theory(problem_axioms);
    t.rules = build(t.report.rules, super, "axioms");
  } else {
    Theory th = load_theory_file(source);
    t.report = analyze_theory(th.axioms, th.rules);
    std::vector<Prr> all = th.rules;
    all.insert(all.end(), t.report.rules.begin(), t.report.rules.end());
    t.rules = build(all, super, "file:" + fs::path(source).stem().string());
  }
  for (const auto& a : t.report.residual) t.residual.push_back(a.formula);
  return t;
}

Obligation split_obligation(const TptpProblem& p) {
  if (p.count(TptpRole::Conjecture) > 1)
    throw MultipleConjectures(std::to_string(p.count(TptpRole::Conjecture)) + " conjectures in one problem");
  Obligation o;
  for (const auto& f : p.formulas) {
    if (f.role == TptpRole::Conjecture)
      o.goals.push_back(Formula::negate(f.formula));
    else if (f.role == TptpRole::NegatedConjecture)
      o.goals.push_back(f.formula);
    else
      o.axioms.push_back({f.name, f.formula});
  }
  return o;
}

RunResult run_inputs(const std::string& id, const std::vector<Formula>& inputs, const RuleSet& rules,
                     const RunConfig& cfg) {
  RunResult r;
  r.problem = id;
  r.mode = cfg.super ? "super" : "unfold";
  auto t0 = std::chrono::steady_clock::now();
  ProofResult res = prove(inputs, rules, cfg.search);
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  switch (res.status) {
    case ProofStatus::Theorem: r.status = RunStatus::Theorem; break;
    case ProofStatus::Exhausted: r.status = RunStatus::GaveUp; break;
    case ProofStatus::Timeout: r.status = RunStatus::Timeout; break;
  }
  if (r.status != RunStatus::Theorem) return r;
  r.nodes = res.nodes();
  ProofTrace trace = emit_trace(res.proof);
  if (cfg.check) {
    // Re-read the written form so the check covers serialization too.
    CheckVerdict v = check_proof(read_trace(write_trace(trace)), rules);
    if (!v.accepted) {
      r.status = RunStatus::Error;
      r.message = std::string("checker rejected node ") + std::to_string(v.node) + ": " + to_string(v.error) + " " +
                  v.detail;
    }
  }
  if (!cfg.trace_path.empty()) {
    std::ofstream out(cfg.trace_path);
    out << write_trace(trace);
    if (!out) throw std::runtime_error("cannot write trace " + cfg.trace_path);
    r.trace = cfg.trace_path;
  }
  return r;
}

RunResult run_problem(const std::string& path, const RunConfig& cfg) {
  RunResult r;
  r.problem = fs::path(path).filename().string();
  r.mode = cfg.super ? "super" : "unfold";
  try {
    Obligation ob = split_obligation(load_problem(path, cfg.include_dir));
    std::vector<Formula> inputs;
    LoadedTheory th;
    if (cfg.theory == "axioms") {
      th = load_theory("axioms", cfg.super, ob.axioms);
      inputs = th.residual;
    } else {
      th = load_theory(cfg.theory, cfg.super);
      inputs = th.residual;
      for (const auto& a : ob.axioms) inputs.push_back(a.formula);
    }
    inputs.insert(inputs.end(), ob.goals.begin(), ob.goals.end());
    return run_inputs(r.problem, inputs, th.rules, cfg);
  } catch (const SyntaxError& e) {
    r.message = "line " + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what();
  } catch (const std::exception& e) {
    r.message = e.what();
  }
  return r;
}

std::string csv_header() { return "problem,mode,status,ms,nodes,trace"; }

std::string csv_row(const RunResult& r) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
    return o + "\"";
  };
  std::ostringstream o;
  o << field(r.problem) << ',' << r.mode << ',' << to_string(r.status) << ',' << std::fixed << std::setprecision(1)
    << r.ms << ',' << r.nodes << ',' << field(r.trace);
  return o.str();
}

std::vector<RunResult> bench(const std::string& dir, const RunConfig& cfg, int jobs, const std::string& trace_dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".p") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (!trace_dir.empty()) fs::create_directories(trace_dir);

  std::vector<std::pair<fs::path, bool>> tasks;
  for (const auto& f : files) {
    tasks.emplace_back(f, true);
    tasks.emplace_back(f, false);
  }
  std::vector<RunResult> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      RunConfig c = cfg;
      c.super = tasks[i].second;
      c.trace_path.clear();
      if (!trace_dir.empty())
        c.trace_path = (fs::path(trace_dir) / (tasks[i].first.stem().string() + (c.super ? ".super" : ".unfold") + ".sdt")).string();
      out[i] = run_problem(tasks[i].first.string(), c);
    }
  };
  int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace supded
