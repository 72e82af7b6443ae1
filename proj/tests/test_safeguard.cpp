#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "testutil.hpp"
#include "vibench/solvers.hpp"

using namespace vibench;

namespace {

SolverConfig safe_cfg(double eps = 1e-3) {
  SolverConfig cfg;
  cfg.algorithm = Algorithm::PRG_SAFE;
  cfg.alpha = 0.4;
  cfg.lambda_init = 0.01;
  cfg.eps = eps;
  return cfg;
}

// Recheck the repair inequalities of a finished run, straight from the trace.
struct RepairRecheck {
  long repaired = 0;
  long failed = 0;
};

RepairRecheck recheck_repairs(const RunReport& rep, const ProblemInstance& problem,
                              double alpha, double lambda_bar) {
  RepairRecheck out;
  for (std::size_t n = 1; n < rep.trace.size(); ++n) {
    const IterationRecord& cur = rep.trace[n];
    const IterationRecord& prev = rep.trace[n - 1];
    if (cur.repair == RepairKind::None) continue;
    ++out.repaired;
    Vector f_y = problem.eval(cur.y);
    Vector f_y_prev = problem.eval(prev.y);
    double bound = alpha * dist(cur.y, prev.y) + 1e-12;
    if (cur.repair == RepairKind::ShrinkLambda) {
      Vector d = combine(cur.lambda, f_y, -prev.lambda, f_y_prev);
      if (norm(d) > bound) ++out.failed;
    } else {
      double lam_lo = cur.theta * prev.lambda;
      Vector d = combine(cur.lambda, f_y, -lam_lo, f_y_prev);
      if (norm(d) > bound) ++out.failed;
      // the stepsize rule admitted the interval: lambda(y', theta') >= theta' lambda_{n-1}
      SafeState state;
      state.y_prev = prev.y;
      state.f_y_prev = f_y_prev;
      state.lambda_prev = prev.lambda;
      state.theta_prev = prev.theta;
      double cap = lambda_rule_given(cur.y, f_y, cur.theta, state, alpha, lambda_bar);
      if (cap < lam_lo - 1e-12) ++out.failed;
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("safeguard") {

TEST_CASE("lambda_rule corner cases") {
  SafeState state;
  state.y_prev = Vector{0.0, 0.0};
  state.f_y_prev = Vector{1.0, 1.0};
  state.lambda_prev = 0.2;
  state.theta_prev = 1.0;

  // equal mapping values on a real move: first term is +inf
  double lam = lambda_rule_given(Vector{1.0, 0.0}, Vector{1.0, 1.0}, 1.0, state, 0.4, 1e6);
  CHECK(lam == doctest::Approx(0.4));  // (1+1)/1 * 0.2

  // theta = theta_prev = 1 never more than doubles the stepsize
  double lam2 = lambda_rule_given(Vector{1.0, 0.0}, Vector{5.0, 1.0}, 1.0, state, 0.4, 1e6);
  CHECK(lam2 <= 2.0 * state.lambda_prev + 1e-15);

  // 0/0 reads +inf: same y, same F
  double lam3 =
      lambda_rule_given(state.y_prev, state.f_y_prev, 1.0, state, 0.4, 7.0);
  CHECK(lam3 == doctest::Approx(std::min(0.4, 7.0)));

  CHECK_THROWS_AS(lambda_rule_given(Vector{1.0, 0.0}, Vector{1.0, 1.0}, 0.0, state, 0.4, 1e6),
                  std::invalid_argument);
  CHECK_THROWS_AS(lambda_rule_given(Vector{1.0, 0.0}, Vector{1.0, 1.0}, 1.5, state, 0.4, 1e6),
                  std::invalid_argument);
}

TEST_CASE("lambda_rule evaluates the mapping exactly once") {
  auto line = testutil::identity_line();
  SafeState state;
  state.y_prev = Vector{0.0};
  state.f_y_prev = line.eval(state.y_prev);
  state.lambda_prev = 0.1;
  state.theta_prev = 1.0;
  std::uint64_t before = line.eval_count();
  Vector f_y;
  double lam = lambda_rule(line, Vector{2.0}, 1.0, state, 0.4, 1e6, &f_y);
  CHECK(line.eval_count() - before == 1);
  CHECK(f_y == Vector{2.0});
  CHECK(lam == doctest::Approx(std::min(0.4, 0.2)));  // ratio alpha vs 2*lambda_prev
}

TEST_CASE("stepsizes stay within [alpha/L, lambda_bar] when L is known") {
  SolverConfig cfg = safe_cfg(1e-6);
  auto p = problem1(50);
  auto rep = solve(p, cfg);
  CHECK(rep.terminated == Termination::Converged);
  REQUIRE(!rep.lambda_history.empty());
  for (double lam : rep.lambda_history) {
    CHECK(lam >= cfg.alpha / *p.lipschitz - 1e-12);
    CHECK(lam <= cfg.lambda_bar);
  }

  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    auto p2 = problem2(10, seed);
    auto rep2 = solve(p2, cfg);
    CHECK(rep2.terminated == Termination::Converged);
    for (double lam : rep2.lambda_history) {
      CHECK(lam >= cfg.alpha / *p2.lipschitz - 1e-12);
      CHECK(lam <= cfg.lambda_bar);
    }
  }
}

TEST_CASE("t value vanishes at a stationary configuration") {
  SafeState state;
  Vector pt{1.0, 2.0};
  state.x_prev = pt;
  state.x_cur = pt;
  state.y_prev = pt;
  state.f_y_prev = Vector{0.0, 0.0};
  state.lambda_prev = 0.3;
  state.theta_prev = 1.0;
  double t = compute_tn(state, 0.3, pt, pt, Vector{3.0, -1.0}, 0.4);
  CHECK(t == doctest::Approx(0.0));
}

TEST_CASE("t value double-entry recomputation on a recorded triple") {
  auto p = problem4(5);
  SolverConfig cfg = safe_cfg(1e-6);
  cfg.trace = true;
  auto rep = solve(p, cfg);
  REQUIRE(rep.trace.size() >= 3);

  // pick an interior iteration and recompute every term independently
  std::size_t n = rep.trace.size() / 2;
  const Vector& x_next = rep.trace[n].x;
  const Vector& x_cur = rep.trace[n - 1].x;
  const Vector& x_prev = n >= 2 ? rep.trace[n - 2].x : rep.trace_x0;
  const Vector& y_prev = rep.trace[n - 1].y;
  REQUIRE(rep.trace[n].repair == RepairKind::None);
  Vector y = combine(2.0, x_cur, -1.0, x_prev);
  CHECK(dist(y, rep.trace[n].y) <= 1e-12);
  double lambda = rep.trace[n].lambda;
  Vector f_y = p.eval(y);

  SafeState state{x_prev, x_cur, y_prev, p.eval(y_prev), rep.trace[n - 1].lambda,
                  rep.trace[n - 1].theta};
  double got = compute_tn(state, lambda, x_next, y, f_y, cfg.alpha);

  const double sq2 = std::numbers::sqrt2;
  auto nsq = [](const Vector& a, const Vector& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return acc;
  };
  double want = -nsq(x_next, x_cur) + 2.0 * lambda * (inner(f_y, y) - inner(f_y, x_next)) +
                (1.0 - cfg.alpha * (1.0 + sq2)) * nsq(x_cur, y) -
                cfg.alpha * nsq(x_cur, y_prev) + (1.0 - sq2 * cfg.alpha) * nsq(x_next, y);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  CHECK(got == rep.trace[n].t_value);
}

TEST_CASE("safeguard coefficients are positive across the alpha range") {
  SplitMix64 rng(9);
  const double sq2 = std::numbers::sqrt2;
  for (int i = 0; i < 200; ++i) {
    double alpha = rng.next_uniform(1e-6, sq2 - 1.0 - 1e-9);
    CHECK(1.0 - alpha * (1.0 + sq2) > 0.0);
    CHECK(alpha > 0.0);
    CHECK(1.0 - sq2 * alpha > 0.0);
  }
}

TEST_CASE("quadratic orthant benchmark at both tolerances") {
  auto p = problem4(5);
  auto rep = solve(p, safe_cfg(1e-3));
  CHECK(rep.terminated == Termination::Converged);
  CHECK(rep.iterations == doctest::Approx(20).epsilon(0.30));
  CHECK(rep.np <= rep.iterations + 5);
  CHECK(rep.nf <= rep.iterations + 10);

  auto rep6 = solve(p, safe_cfg(1e-6));
  CHECK(rep6.terminated == Termination::Converged);
  CHECK(rep6.iterations == doctest::Approx(43).epsilon(0.30));
}

TEST_CASE("exponential benchmark converges to the known point") {
  // The mapping overflows doubles a thousandth of the way along the first
  // nominal trial step, so the start-up probe engages and the stepsize then
  // climbs from alpha/L(x0) under the doubling cap before the iteration can
  // contract. 45 iterations is the deterministic figure for this build.
  auto p = problem5();
  auto rep = solve(p, safe_cfg(1e-3));
  CHECK(rep.terminated == Termination::Converged);
  CHECK(rep.iterations >= 40);
  CHECK(rep.iterations <= 50);
  CHECK(dist(rep.final_x, *p.solution) <= 1e-2);

  auto rep6 = solve(p, safe_cfg(1e-6));
  CHECK(rep6.terminated == Termination::Converged);
  CHECK(dist(rep6.final_x, *p.solution) <= 1e-5);
}

TEST_CASE("simplex NCP benchmark converges") {
  auto p = problem3();
  auto rep = solve(p, safe_cfg(1e-3));
  CHECK(rep.terminated == Termination::Converged);
  CHECK(rep.final_residual <= 1e-3);
}

TEST_CASE("repairs, when they fire, satisfy their defining inequalities") {
  // The tight-tolerance NCP run exercises the repair branches.
  auto p = problem3();
  SolverConfig cfg = safe_cfg(1e-6);
  cfg.trace = true;
  auto rep = solve(p, cfg);
  CHECK(rep.terminated == Termination::Converged);
  auto rc = recheck_repairs(rep, p, cfg.alpha, cfg.lambda_bar);
  CHECK(rc.repaired == rep.repaired_iterations);
  CHECK(rc.failed == 0);
}

TEST_CASE("counter audit including repair work") {
  auto p = problem3();
  SolverConfig cfg = safe_cfg(1e-6);
  std::uint64_t proj_before = projection_count();
  std::uint64_t eval_before = p.eval_count();
  auto rep = solve(p, cfg);
  CHECK(projection_count() - proj_before == static_cast<std::uint64_t>(rep.np));
  CHECK(p.eval_count() - eval_before == static_cast<std::uint64_t>(rep.nf));
}

TEST_CASE("infeasible starting points are projected first") {
  auto base = problem3();
  auto moved = base;
  moved.start = Vector{5.0, 5.0, 5.0, 5.0};  // off the simplex
  auto rep = solve(moved, safe_cfg(1e-3));
  CHECK(rep.terminated == Termination::Converged);
}

}  // TEST_SUITE
