#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vibench/solvers.hpp"

namespace vibench {

struct ExperimentSpec {
  std::string problem;  // p1..p5
  int m = 0;            // 0 takes the problem's natural size
  std::uint64_t seed = 0;
  SolverConfig config;
  std::optional<Vector> start;  // overrides the problem default
  bool random_start = false;    // draw a feasible start per repeat
  int repeats = 1;
};

struct TableRow {
  std::string problem;
  int m = 0;
  std::uint64_t seed = 0;
  std::string solver;
  double eps = 0.0;
  long iterations = 0;
  long np = 0;
  long nf = 0;
  double wall_seconds = 0.0;
  double final_residual = 0.0;
  std::string terminated;
};

// One row per repeat. A fresh problem instance is built per repeat so runs
// never share counters. Random starts are drawn feasibly: uniformly on a
// scaled simplex via normalized exponentials, otherwise the default start
// plus a U(-1,1) perturbation projected back onto the set; the sampler is a
// single SplitMix64 stream seeded with the spec seed, consumed in repeat
// order. When lambda is unset for a constant-stepsize method and the problem
// has a known L, lambda defaults to 0.4/L.
std::vector<TableRow> run_experiment(const ExperimentSpec& spec);

// The built-in experiment suites:
//   1: p1, EGM/SubEGM/SubPM/PRG, m in {500,1000,2000,4000}, lambda 0.4, eps 1e-3
//   2: p2, five stationary methods, m in {10,20,50}, instance seeds
//      seed+0..seed+2 per size, lambda 0.4/L, eps 1e-3
//   3: p3, PRG_SAFE, starts {(1,1,1,1), (0.5,0.5,2,1), 3 random}, eps 1e-3/1e-6
//   4: p4, PRG_SAFE, m in {5,50,500,1000}, eps 1e-3/1e-6
//   5: p5, PRG_SAFE, starts {(1,..,1), (0,..,0), 2 random}, eps 1e-3/1e-6
std::vector<TableRow> run_table(int table_id, std::uint64_t seed);

// CSV with the exact header
// problem,m,seed,solver,eps,iterations,np,nf,wall_seconds,final_residual,terminated
// RFC-4180 quoting, LF line ends, floats at 17 significant digits.
std::string emit_csv(const std::vector<TableRow>& rows);
std::vector<TableRow> parse_csv(const std::string& text);

std::string emit_markdown(const std::vector<TableRow>& rows);
// Solvers as columns, one line per (problem, m, seed, eps) group.
std::string emit_markdown_paper(const std::vector<TableRow>& rows);

struct AuditResult {
  long checked = 0;
  long violations = 0;
};

// Re-runs the spec with traces on and audits the per-iteration descent
// inequality where the problem carries a known solution (and, for the
// constant-stepsize reflected method, a known L). Other runs audit nothing.
AuditResult audit_experiment(const ExperimentSpec& spec);

}  // namespace vibench
