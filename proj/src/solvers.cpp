#include "vibench/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace vibench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSqrt2 = std::numbers::sqrt2;

double ratio_or_inf(double num, double den) {
  return den == 0.0 ? kInf : num / den;
}

// ||a*x - b*y||
double scaled_diff_norm(double a, const Vector& x, double b, const Vector& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = a * x[i] - b * y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void validate_common(const ProblemInstance& problem, const SolverConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("solver: eps must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (problem.set.dim() != problem.dim()) {
    throw std::invalid_argument("solver: feasible set and mapping dimensions differ");
  }
  if (static_cast<int>(problem.start.size()) != problem.dim()) {
    throw std::invalid_argument("solver: start point dimension mismatch");
  }
  ensure_finite(problem.start, "solver start");
}

enum class StepsizeRange { Reflected, Extragradient, Popov };

// The Popov-style range (0, 1/(3L)] is not enforced: the standard benchmark
// settings (lambda = 0.4 with L = 1) sit outside it and still converge.
double require_lambda(const ProblemInstance& problem, const SolverConfig& cfg,
                      StepsizeRange range) {
  if (!cfg.lambda || !(*cfg.lambda > 0.0)) {
    throw std::invalid_argument("solver: lambda must be set and positive");
  }
  double lambda = *cfg.lambda;
  if (problem.lipschitz) {
    double l = *problem.lipschitz;
    if (range == StepsizeRange::Reflected && !(lambda < (kSqrt2 - 1.0) / l)) {
      throw std::invalid_argument("solver: lambda must lie in (0, (sqrt(2)-1)/L)");
    }
    if (range == StepsizeRange::Extragradient && !(lambda < 1.0 / l)) {
      throw std::invalid_argument("solver: lambda must lie in (0, 1/L)");
    }
  }
  return lambda;
}

void validate_adaptive(const SolverConfig& cfg) {
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < kSqrt2 - 1.0)) {
    throw std::invalid_argument("solver: alpha must lie in (0, sqrt(2)-1)");
  }
  if (!(cfg.lambda_init > 0.0)) throw std::invalid_argument("solver: lambda_init must be positive");
  if (!(cfg.lambda_bar > 0.0)) throw std::invalid_argument("solver: lambda_bar must be positive");
}

struct Run {
  const ProblemInstance& problem;
  const SolverConfig& cfg;
  RunReport rep;

  Run(const ProblemInstance& p, const SolverConfig& c) : problem(p), cfg(c) {
    rep.final_x = p.start;
    if (c.trace) rep.trace_x0 = p.start;
  }

  Vector feval(const Vector& x) {
    ++rep.nf;
    return problem.eval(x);
  }

  Vector project_c(const Vector& x) {
    ++rep.np;
    return problem.set.project(x);
  }

  void push_trace(const Vector& x, const Vector& y, double lambda, double theta,
                  double res, double t, RepairKind rk) {
    if (cfg.trace) rep.trace.push_back({x, y, lambda, theta, res, t, rk});
  }

  // A non-finite mapping value ends the run; projecting it would throw.
  bool guard(const Vector& value, long pass) {
    if (all_finite(value)) return false;
    rep.terminated = Termination::Stalled;
    rep.iterations = pass + 1;
    rep.final_residual = kNaN;
    rep.residual_history.push_back(kNaN);
    return true;
  }

  // Returns true when the run is over (converged or stalled).
  bool finish_pass(long pass, double res, const Vector& x_next) {
    rep.residual_history.push_back(res);
    if (!std::isfinite(res) || !all_finite(x_next)) {
      rep.terminated = Termination::Stalled;
      rep.iterations = pass + 1;
      rep.final_residual = res;
      return true;
    }
    rep.final_x = x_next;
    rep.final_residual = res;
    if (res <= cfg.eps) {
      rep.terminated = Termination::Converged;
      rep.iterations = pass + 1;
      return true;
    }
    return false;
  }

  RunReport take(long cap) {
    if (rep.terminated == Termination::MaxIter) rep.iterations = cap;
    return std::move(rep);
  }
};

struct Probe {
  Vector y0;
  Vector f_y0;
  double lambda0 = 0.0;
  bool ok = false;
};

// First trial step for the adaptive methods. The nominal lambda_init is
// halved until the probe point has a finite mapping value in the same range
// as F(x0); problems whose mapping is tame accept the first probe, so the
// nominal stepsize is used unchanged there. The resulting lambda0 then
// reflects the curvature near x0 instead of collapsing to zero when the
// mapping overflows further out.
Probe initial_probe(Run& run, const Vector& x0, const Vector& f_x0,
                    double lambda_init, double alpha, double lambda_bar) {
  Probe probe;
  const double f_scale = norm(f_x0) + 1.0;
  double h = lambda_init;
  for (int trial = 0; trial < 200; ++trial, h *= 0.5) {
    Vector y0 = run.project_c(add_scaled(x0, -h, f_x0));
    Vector f_y0 = run.feval(y0);
    if (!all_finite(f_y0)) continue;
    if (dist(f_y0, f_x0) > f_scale) continue;
    probe.lambda0 =
        std::min(ratio_or_inf(alpha * dist(x0, y0), dist(f_x0, f_y0)), lambda_bar);
    probe.y0 = std::move(y0);
    probe.f_y0 = std::move(f_y0);
    probe.ok = true;
    return probe;
  }
  return probe;
}

}  // namespace

Algorithm algorithm_from_name(std::string_view name) {
  std::string up(name);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  std::replace(up.begin(), up.end(), '-', '_');
  if (up == "PRG") return Algorithm::PRG;
  if (up == "PRG_ADAPT") return Algorithm::PRG_ADAPT;
  if (up == "PRG_SAFE") return Algorithm::PRG_SAFE;
  if (up == "EGM") return Algorithm::EGM;
  if (up == "SUBEGM") return Algorithm::SUBEGM;
  if (up == "TBFM") return Algorithm::TBFM;
  if (up == "SUBPM") return Algorithm::SUBPM;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::PRG: return "PRG";
    case Algorithm::PRG_ADAPT: return "PRG_ADAPT";
    case Algorithm::PRG_SAFE: return "PRG_SAFE";
    case Algorithm::EGM: return "EGM";
    case Algorithm::SUBEGM: return "SUBEGM";
    case Algorithm::TBFM: return "TBFM";
    case Algorithm::SUBPM: return "SUBPM";
  }
  return "?";
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MaxIter: return "MaxIter";
    case Termination::Stalled: return "Stalled";
  }
  return "?";
}

double residual(const ProblemInstance& problem, double lambda, const Vector& x,
                const Vector& y) {
  if (!(lambda > 0.0)) throw std::invalid_argument("residual: lambda must be positive");
  ensure_same_dim(x, y, "residual");
  Vector f_y = problem.eval(y);
  Vector p = problem.set.project(add_scaled(x, -lambda, f_y));
  return dist(y, p) + dist(x, y);
}

double lambda_rule_given(const Vector& y, const Vector& f_y, double theta,
                         const SafeState& state, double alpha, double lambda_bar) {
  if (!(theta > 0.0) || theta > 1.0) {
    throw std::invalid_argument("lambda_rule: theta must lie in (0, 1]");
  }
  double first = ratio_or_inf(alpha * dist(y, state.y_prev), dist(f_y, state.f_y_prev));
  double second = (1.0 + state.theta_prev) / theta * state.lambda_prev;
  return std::min({first, second, lambda_bar});
}

double lambda_rule(const ProblemInstance& problem, const Vector& y, double theta,
                   const SafeState& state, double alpha, double lambda_bar,
                   Vector* f_y_out) {
  Vector f_y = problem.eval(y);
  double lambda = lambda_rule_given(y, f_y, theta, state, alpha, lambda_bar);
  if (f_y_out) *f_y_out = std::move(f_y);
  return lambda;
}

double compute_tn(const SafeState& state, double lambda_n, const Vector& x_next,
                  const Vector& y_n, const Vector& f_y_n, double alpha) {
  double dx = dist(x_next, state.x_cur);
  double xy = dist(state.x_cur, y_n);
  double xyp = dist(state.x_cur, state.y_prev);
  double xny = dist(x_next, y_n);
  double cross = inner(f_y_n, subtract(y_n, x_next));
  return -dx * dx + 2.0 * lambda_n * cross + (1.0 - alpha * (1.0 + kSqrt2)) * xy * xy -
         alpha * xyp * xyp + (1.0 - kSqrt2 * alpha) * xny * xny;
}

// x_{n+1} = P_C(x_n - lambda F(y_n)), y_{n+1} = 2 x_{n+1} - x_n. The residual
// shares the pass's own projection: P_C(x_n - lambda F(y_n)) is x_{n+1}, so
// each iteration costs exactly one projection and one evaluation.
RunReport solve_prg(const ProblemInstance& problem, const SolverConfig& cfg) {
  validate_common(problem, cfg);
  const double lambda = require_lambda(problem, cfg, StepsizeRange::Reflected);
  Run run(problem, cfg);

  Vector x = problem.start;
  Vector y = x;
  for (long n = 0; n < cfg.max_iter; ++n) {
    Vector f_y = run.feval(y);
    if (run.guard(f_y, n)) break;
    Vector x_next = run.project_c(add_scaled(x, -lambda, f_y));
    double res = dist(y, x_next) + dist(x, y);
    run.push_trace(x_next, y, lambda, 1.0, res, kNaN, RepairKind::None);
    if (run.finish_pass(n, res, x_next)) break;
    y = combine(2.0, x_next, -1.0, x);
    x = std::move(x_next);
  }
  return run.take(cfg.max_iter);
}

RunReport solve_egm(const ProblemInstance& problem, const SolverConfig& cfg) {
  validate_common(problem, cfg);
  const double lambda = require_lambda(problem, cfg, StepsizeRange::Extragradient);
  Run run(problem, cfg);

  Vector x = problem.start;
  for (long n = 0; n < cfg.max_iter; ++n) {
    Vector f_x = run.feval(x);
    if (run.guard(f_x, n)) break;
    Vector y = run.project_c(add_scaled(x, -lambda, f_x));
    Vector f_y = run.feval(y);
    if (run.guard(f_y, n)) break;
    Vector x_next = run.project_c(add_scaled(x, -lambda, f_y));
    double res = dist(x, y);
    run.push_trace(x_next, y, lambda, 1.0, res, kNaN, RepairKind::None);
    if (run.finish_pass(n, res, x_next)) break;
    x = std::move(x_next);
  }
  return run.take(cfg.max_iter);
}

// Second projection replaced by the closed-form halfspace
// T_n = {w | <x_n - lambda F(x_n) - y_n, w - y_n> <= 0}; a zero normal
// (always the case on the whole space) makes T_n the whole space.
RunReport solve_subegm(const ProblemInstance& problem, const SolverConfig& cfg) {
  validate_common(problem, cfg);
  const double lambda = require_lambda(problem, cfg, StepsizeRange::Extragradient);
  Run run(problem, cfg);

  Vector x = problem.start;
  for (long n = 0; n < cfg.max_iter; ++n) {
    Vector f_x = run.feval(x);
    if (run.guard(f_x, n)) break;
    Vector v = add_scaled(x, -lambda, f_x);
    Vector y = run.project_c(v);
    Vector normal = subtract(v, y);
    Vector f_y = run.feval(y);
    if (run.guard(f_y, n)) break;
    Vector x_next =
        project_halfspace(normal, inner(normal, y), add_scaled(x, -lambda, f_y));
    double res = dist(x, y);
    run.push_trace(x_next, y, lambda, 1.0, res, kNaN, RepairKind::None);
    if (run.finish_pass(n, res, x_next)) break;
    x = std::move(x_next);
  }
  return run.take(cfg.max_iter);
}

RunReport solve_tbfm(const ProblemInstance& problem, const SolverConfig& cfg) {
  validate_common(problem, cfg);
  const double lambda = require_lambda(problem, cfg, StepsizeRange::Extragradient);
  Run run(problem, cfg);

  Vector x = problem.start;
  for (long n = 0; n < cfg.max_iter; ++n) {
    Vector f_x = run.feval(x);
    if (run.guard(f_x, n)) break;
    Vector y = run.project_c(add_scaled(x, -lambda, f_x));
    Vector f_y = run.feval(y);
    if (run.guard(f_y, n)) break;
    // x_{n+1} = y_n + lambda (F(x_n) - F(y_n)); may leave the feasible set.
    Vector x_next(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      x_next[i] = y[i] + lambda * (f_x[i] - f_y[i]);
    }
    double res = dist(x, y);
    run.push_trace(x_next, y, lambda, 1.0, res, kNaN, RepairKind::None);
    if (run.finish_pass(n, res, x_next)) break;
    x = std::move(x_next);
  }
  return run.take(cfg.max_iter);
}

// One mapping value and one projection onto C per iteration. Start-up takes
// y_0 = x_0 and F(y_{-1}) := F(y_0) so the first halfspace is well defined.
// The termination quantity r(x_{n+1}, y_n) reuses y_{n+1}, the pass's own
// projection onto C.
RunReport solve_subpm(const ProblemInstance& problem, const SolverConfig& cfg) {
  validate_common(problem, cfg);
  const double lambda = require_lambda(problem, cfg, StepsizeRange::Popov);
  Run run(problem, cfg);

  Vector x = problem.start;
  Vector y = x;
  Vector f_y_prev;
  for (long n = 0; n < cfg.max_iter; ++n) {
    Vector f_y = run.feval(y);
    if (run.guard(f_y, n)) break;
    if (f_y_prev.empty()) f_y_prev = f_y;
    Vector normal(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      normal[i] = x[i] - lambda * f_y_prev[i] - y[i];
    }
    Vector x_next =
        project_halfspace(normal, inner(normal, y), add_scaled(x, -lambda, f_y));
    Vector y_next = run.project_c(add_scaled(x_next, -lambda, f_y));
    double res = dist(y, y_next) + dist(x_next, y);
    run.push_trace(x_next, y, lambda, 1.0, res, kNaN, RepairKind::None);
    if (run.finish_pass(n, res, x_next)) break;
    f_y_prev = std::move(f_y);
    x = std::move(x_next);
    y = std::move(y_next);
  }
  return run.take(cfg.max_iter);
}

// Reflected iteration with lambda_n = min(alpha ||y_n - y_{n-1}|| /
// ||F(y_n) - F(y_{n-1})||, lambda_bar), 0/0 read as +infinity. No Lipschitz
// constant needed; convergence is heuristic and the report says so.
RunReport solve_prg_adaptive(const ProblemInstance& problem, const SolverConfig& cfg) {
  validate_common(problem, cfg);
  validate_adaptive(cfg);
  Run run(problem, cfg);
  run.rep.heuristic = true;

  Vector x = problem.start;
  Vector y = x;
  Vector y_prev, f_y_prev;

  // lambda_0 from a probe step of nominal length lambda_init, so the first
  // update is already scaled to the curvature near the start.
  Vector f_x0 = problem.eval(x);
  ++run.rep.nf;
  if (run.guard(f_x0, 0)) return run.take(cfg.max_iter);
  Probe probe = initial_probe(run, x, f_x0, cfg.lambda_init, cfg.alpha, cfg.lambda_bar);
  if (!probe.ok) {
    run.rep.terminated = Termination::Stalled;
    run.rep.iterations = 0;
    return run.rep;
  }
  double lambda = probe.lambda0;

  for (long n = 0; n < cfg.max_iter; ++n) {
    Vector f_y = n == 0 ? f_x0 : run.feval(y);
    if (run.guard(f_y, n)) break;
    if (n > 0) {
      lambda = std::min(ratio_or_inf(cfg.alpha * dist(y, y_prev), dist(f_y, f_y_prev)),
                        cfg.lambda_bar);
    }
    run.rep.lambda_history.push_back(lambda);
    Vector x_next = run.project_c(add_scaled(x, -lambda, f_y));
    double res = dist(y, x_next) + dist(x, y);
    run.push_trace(x_next, y, lambda, 1.0, res, kNaN, RepairKind::None);
    if (run.finish_pass(n, res, x_next)) break;
    y_prev = std::move(y);
    f_y_prev = std::move(f_y);
    y = combine(2.0, x_next, -1.0, x);
    x = std::move(x_next);
  }
  return run.take(cfg.max_iter);
}

RunReport solve_prg_safeguarded(const ProblemInstance& problem, const SolverConfig& cfg) {
  validate_common(problem, cfg);
  validate_adaptive(cfg);
  const double alpha = cfg.alpha;
  const double lbar = cfg.lambda_bar;
  Run run(problem, cfg);

  // Start-up: y_0 = P_C(x_0 - lambda_{-1} F(x_0)), then lambda_0 and x_1.
  Vector x_prev = problem.start;
  if (!problem.set.contains(x_prev, 1e-12)) x_prev = run.project_c(x_prev);
  if (cfg.trace) run.rep.trace_x0 = x_prev;
  Vector f_x0 = run.feval(x_prev);
  if (run.guard(f_x0, -1)) return run.take(cfg.max_iter);
  Probe probe = initial_probe(run, x_prev, f_x0, cfg.lambda_init, alpha, lbar);
  if (!probe.ok) {
    run.rep.terminated = Termination::Stalled;
    run.rep.iterations = 0;
    return run.rep;
  }
  Vector y_prev = std::move(probe.y0);
  Vector f_y_prev = std::move(probe.f_y0);
  double lambda_prev = probe.lambda0;
  double theta_prev = 1.0;
  Vector x_cur = run.project_c(add_scaled(x_prev, -lambda_prev, f_y_prev));
  run.rep.lambda_history.push_back(lambda_prev);
  run.push_trace(x_cur, y_prev, lambda_prev, 1.0, kNaN, kNaN, RepairKind::None);
  run.rep.final_x = x_cur;

  for (long n = 0; n < cfg.max_iter; ++n) {
    if (!all_finite(x_cur)) {
      run.rep.terminated = Termination::Stalled;
      run.rep.iterations = n;
      return run.rep;
    }
    SafeState state{x_prev, x_cur, y_prev, f_y_prev, lambda_prev, theta_prev};
    double theta = 1.0;
    Vector y = combine(2.0, x_cur, -1.0, x_prev);
    Vector f_y = run.feval(y);
    if (run.guard(f_y, n)) break;
    double lambda = lambda_rule_given(y, f_y, theta, state, alpha, lbar);
    Vector x_next = run.project_c(add_scaled(x_cur, -lambda, f_y));
    // r(x_n, y_n) with the current lambda_n; the inner projection is x_{n+1}.
    double res = dist(y, x_next) + dist(x_cur, y);
    run.rep.lambda_history.push_back(lambda);

    if (!std::isfinite(res) || !all_finite(x_next) || res <= cfg.eps) {
      run.push_trace(x_next, y, lambda, theta, res, kNaN, RepairKind::None);
      run.finish_pass(n, res, x_next);
      return run.take(cfg.max_iter);
    }
    run.rep.residual_history.push_back(res);

    double t_n = compute_tn(state, lambda, x_next, y, f_y, alpha);
    RepairKind repair = RepairKind::None;
    if (t_n > 0.0) {
      if (lambda >= lambda_prev) {
        // (i) pick lambda' in [lambda_{n-1}, lambda_n] with
        // ||lambda' F(y_n) - lambda_{n-1} F(y_{n-1})|| <= alpha ||y_n - y_{n-1}||;
        // lambda' = lambda_{n-1} always qualifies.
        double bound = alpha * dist(y, y_prev);
        double chosen = lambda_prev;
        for (int k = 0; k < 40; ++k) {
          double cand = lambda_prev + (lambda - lambda_prev) * std::pow(0.5, k);
          if (scaled_diff_norm(cand, f_y, lambda_prev, f_y_prev) <= bound) {
            chosen = cand;
            break;
          }
        }
        lambda = chosen;
        x_next = run.project_c(add_scaled(x_cur, -lambda, f_y));
        repair = RepairKind::ShrinkLambda;
      } else {
        // (ii) move y_n toward x_n until the stepsize rule allows
        // theta' lambda_{n-1}, then pick lambda' in the admitted interval.
        Vector step = subtract(x_cur, x_prev);
        double theta_trial = 1.0;
        Vector y_trial, f_y_trial;
        double lam_cap = 0.0;
        bool found = false;
        for (int j = 0; j < 60; ++j, theta_trial *= 0.5) {
          y_trial = add_scaled(x_cur, theta_trial, step);
          f_y_trial = (j == 0) ? f_y : run.feval(y_trial);
          if (!all_finite(f_y_trial)) continue;
          lam_cap = lambda_rule_given(y_trial, f_y_trial, theta_trial, state, alpha, lbar);
          if (lam_cap >= theta_trial * lambda_prev) {
            found = true;
            break;
          }
        }
        if (!found) {
          throw std::logic_error("solver: safeguard theta search exhausted");
        }
        double lo = theta_trial * lambda_prev;
        double bound = alpha * dist(y_trial, y_prev);
        double chosen = lo;
        for (int k = 0; k < 40; ++k) {
          double cand = lo + (lam_cap - lo) * std::pow(0.5, k);
          if (scaled_diff_norm(cand, f_y_trial, lo, f_y_prev) <= bound) {
            chosen = cand;
            break;
          }
        }
        y = std::move(y_trial);
        f_y = std::move(f_y_trial);
        theta = theta_trial;
        lambda = chosen;
        x_next = run.project_c(add_scaled(x_cur, -lambda, f_y));
        repair = RepairKind::ShrinkTheta;
      }
      ++run.rep.repaired_iterations;
      run.rep.lambda_history.back() = lambda;
    }

    run.push_trace(x_next, y, lambda, theta, res, t_n, repair);
    run.rep.final_x = x_next;
    run.rep.final_residual = res;

    x_prev = std::move(x_cur);
    x_cur = std::move(x_next);
    y_prev = std::move(y);
    f_y_prev = std::move(f_y);
    lambda_prev = lambda;
    theta_prev = theta;
  }
  return run.take(cfg.max_iter);
}

RunReport solve(const ProblemInstance& problem, const SolverConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::PRG: return solve_prg(problem, cfg);
    case Algorithm::PRG_ADAPT: return solve_prg_adaptive(problem, cfg);
    case Algorithm::PRG_SAFE: return solve_prg_safeguarded(problem, cfg);
    case Algorithm::EGM: return solve_egm(problem, cfg);
    case Algorithm::SUBEGM: return solve_subegm(problem, cfg);
    case Algorithm::TBFM: return solve_tbfm(problem, cfg);
    case Algorithm::SUBPM: return solve_subpm(problem, cfg);
  }
  throw std::logic_error("solve: unknown algorithm");
}

}  // namespace vibench
