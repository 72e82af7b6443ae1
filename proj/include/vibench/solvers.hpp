#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vibench/problems.hpp"

namespace vibench {

enum class Algorithm { PRG, PRG_ADAPT, PRG_SAFE, EGM, SUBEGM, TBFM, SUBPM };

Algorithm algorithm_from_name(std::string_view name);
std::string_view algorithm_name(Algorithm a);

struct SolverConfig {
  Algorithm algorithm = Algorithm::PRG;
  std::optional<double> lambda;  // constant-stepsize methods
  double alpha = 0.4;            // adaptive methods, in (0, sqrt(2)-1)
  double lambda_init = 0.01;     // lambda_{-1}
  double lambda_bar = 1e6;       // stepsize cap
  double eps = 1e-3;
  long max_iter = 100000;
  bool trace = false;
};

enum class Termination { Converged, MaxIter, Stalled };

std::string_view termination_name(Termination t);

enum class RepairKind { None, ShrinkLambda, ShrinkTheta };

// One accepted iteration: x is x_{n+1}, y is the (possibly repaired) y_n.
struct IterationRecord {
  Vector x;
  Vector y;
  double lambda = 0.0;
  double theta = 1.0;
  double residual = 0.0;  // termination quantity checked this pass
  double t_value = 0.0;   // safeguard test value (NaN outside PRG_SAFE)
  RepairKind repair = RepairKind::None;
};

struct RunReport {
  long iterations = 0;
  long np = 0;  // projections onto the feasible set
  long nf = 0;  // mapping evaluations
  Vector final_x;
  double final_residual = 0.0;
  std::vector<double> residual_history;
  std::vector<double> lambda_history;  // adaptive methods only
  Termination terminated = Termination::MaxIter;
  long repaired_iterations = 0;
  bool heuristic = false;  // PRG_ADAPT has no convergence guarantee

  // Populated when SolverConfig::trace is set. trace[k] pairs x_{k+1} with
  // the y_k it was computed from; trace_x0 is the initial iterate.
  Vector trace_x0;
  std::vector<IterationRecord> trace;
};

// r(x, y) = ||y - P_C(x - lambda F(y))|| + ||x - y||; zero exactly at
// solutions. Costs one projection and one mapping evaluation.
double residual(const ProblemInstance& problem, double lambda, const Vector& x,
                const Vector& y);

// Carry-over state between safeguarded iterations.
struct SafeState {
  Vector x_prev;
  Vector x_cur;
  Vector y_prev;
  Vector f_y_prev;  // cached F(y_{n-1})
  double lambda_prev = 0.0;
  double theta_prev = 1.0;
};

// Three-way stepsize rule
//   min{ alpha ||y - y_{n-1}|| / ||F(y) - F(y_{n-1})||,
//        (1 + theta_{n-1}) / theta * lambda_{n-1},  lambda_bar }
// with the convention that division by zero yields +infinity. The variant
// taking the problem evaluates F(y) once and returns it through f_y_out.
double lambda_rule_given(const Vector& y, const Vector& f_y, double theta,
                         const SafeState& state, double alpha, double lambda_bar);
double lambda_rule(const ProblemInstance& problem, const Vector& y, double theta,
                   const SafeState& state, double alpha, double lambda_bar,
                   Vector* f_y_out);

// Safeguard test value; the iteration is accepted as-is when t_n <= 0.
double compute_tn(const SafeState& state, double lambda_n, const Vector& x_next,
                  const Vector& y_n, const Vector& f_y_n, double alpha);

RunReport solve_prg(const ProblemInstance& problem, const SolverConfig& cfg);
RunReport solve_egm(const ProblemInstance& problem, const SolverConfig& cfg);
RunReport solve_subegm(const ProblemInstance& problem, const SolverConfig& cfg);
RunReport solve_tbfm(const ProblemInstance& problem, const SolverConfig& cfg);
RunReport solve_subpm(const ProblemInstance& problem, const SolverConfig& cfg);
RunReport solve_prg_adaptive(const ProblemInstance& problem, const SolverConfig& cfg);
RunReport solve_prg_safeguarded(const ProblemInstance& problem, const SolverConfig& cfg);

RunReport solve(const ProblemInstance& problem, const SolverConfig& cfg);

}  // namespace vibench
