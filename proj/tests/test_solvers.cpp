#include <cmath>
#include <stdexcept>
#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "testutil.hpp"
#include "vibench/solvers.hpp"

using namespace vibench;

namespace {

SolverConfig constant_cfg(Algorithm alg, double lambda, double eps = 1e-3) {
  SolverConfig cfg;
  cfg.algorithm = alg;
  cfg.lambda = lambda;
  cfg.eps = eps;
  return cfg;
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("residual examples") {
  auto p1 = problem1(2);
  Vector zero(2, 0.0);
  CHECK(residual(p1, 0.4, zero, zero) == doctest::Approx(0.0));
  CHECK(residual(p1, 2.5, zero, zero) == doctest::Approx(0.0));

  auto p4 = problem4(2);
  Vector pt{1.0, 1.0};
  CHECK(residual(p4, 0.4, pt, pt) > 0.0);

  auto p5 = problem5();
  Vector star{-1.0, 0.0, 1.0, 2.0, 3.0};
  CHECK(residual(p5, 0.1, star, star) == doctest::Approx(0.0));

  CHECK_THROWS_AS(residual(p1, 0.0, zero, zero), std::invalid_argument);
  CHECK_THROWS_AS(residual(p1, -1.0, zero, zero), std::invalid_argument);
}

TEST_CASE("every method solves the 1-D strongly monotone model") {
  auto line = testutil::identity_line();
  for (Algorithm alg : {Algorithm::PRG, Algorithm::EGM, Algorithm::SUBEGM,
                        Algorithm::TBFM}) {
    auto rep = solve(line, constant_cfg(alg, 0.4, 1e-6));
    CHECK(rep.terminated == Termination::Converged);
    CHECK(std::abs(rep.final_x[0]) <= 1e-5);
  }
  // Popov-style method at its theoretical stepsize 1/(3L)
  auto rep = solve(line, constant_cfg(Algorithm::SUBPM, 0.3, 1e-6));
  CHECK(rep.terminated == Termination::Converged);
  CHECK(std::abs(rep.final_x[0]) <= 1e-5);

  SolverConfig acfg;
  acfg.algorithm = Algorithm::PRG_ADAPT;
  acfg.eps = 1e-6;
  auto arep = solve(line, acfg);
  CHECK(arep.terminated == Termination::Converged);
  CHECK(std::abs(arep.final_x[0]) <= 1e-5);

  SolverConfig scfg;
  scfg.algorithm = Algorithm::PRG_SAFE;
  scfg.eps = 1e-6;
  auto srep = solve(line, scfg);
  CHECK(srep.terminated == Termination::Converged);
  CHECK(std::abs(srep.final_x[0]) <= 1e-5);
}

TEST_CASE("stepsize ranges are validated where the theory demands") {
  auto line = testutil::identity_line();  // L = 1
  CHECK_THROWS_AS(solve(line, constant_cfg(Algorithm::PRG, 0.42)), std::invalid_argument);
  CHECK_THROWS_AS(solve(line, constant_cfg(Algorithm::EGM, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(solve(line, constant_cfg(Algorithm::PRG, 0.0)), std::invalid_argument);

  SolverConfig bad;
  bad.algorithm = Algorithm::PRG_SAFE;
  bad.alpha = 0.5;  // >= sqrt(2)-1
  CHECK_THROWS_AS(solve(line, bad), std::invalid_argument);

  SolverConfig missing = constant_cfg(Algorithm::PRG, 0.4);
  missing.lambda.reset();
  CHECK_THROWS_AS(solve(line, missing), std::invalid_argument);
}

TEST_CASE("PRG costs exactly one projection and one evaluation per iteration") {
  auto p = problem1(50);
  std::uint64_t proj_before = projection_count();
  std::uint64_t eval_before = p.eval_count();
  auto rep = solve(p, constant_cfg(Algorithm::PRG, 0.4));
  CHECK(rep.terminated == Termination::Converged);
  CHECK(rep.np == rep.iterations);
  CHECK(rep.nf == rep.iterations);
  CHECK(projection_count() - proj_before == static_cast<std::uint64_t>(rep.np));
  CHECK(p.eval_count() - eval_before == static_cast<std::uint64_t>(rep.nf));
  CHECK(rep.final_residual <= 1e-3);
  CHECK(static_cast<long>(rep.residual_history.size()) == rep.iterations);
}

TEST_CASE("EGM costs two projections and two evaluations per iteration") {
  auto p = problem1(50);
  std::uint64_t proj_before = projection_count();
  std::uint64_t eval_before = p.eval_count();
  auto rep = solve(p, constant_cfg(Algorithm::EGM, 0.4));
  CHECK(rep.terminated == Termination::Converged);
  CHECK(rep.np == 2 * rep.iterations);
  CHECK(rep.nf == 2 * rep.iterations);
  CHECK(projection_count() - proj_before == static_cast<std::uint64_t>(rep.np));
  CHECK(p.eval_count() - eval_before == static_cast<std::uint64_t>(rep.nf));
}

TEST_CASE("SubPM costs one projection onto C and one evaluation per iteration") {
  auto p = problem2(8, 5);
  std::uint64_t proj_before = projection_count();
  std::uint64_t eval_before = p.eval_count();
  auto rep = solve(p, constant_cfg(Algorithm::SUBPM, 0.4 / *p.lipschitz));
  CHECK(rep.terminated == Termination::Converged);
  CHECK(rep.np == rep.iterations);
  CHECK(rep.nf == rep.iterations);
  CHECK(projection_count() - proj_before == static_cast<std::uint64_t>(rep.np));
  CHECK(p.eval_count() - eval_before == static_cast<std::uint64_t>(rep.nf));
}

TEST_CASE("SubEGM and TBFM reproduce EGM exactly on the whole space") {
  auto p = problem1(12);
  SolverConfig cfg = constant_cfg(Algorithm::EGM, 0.4, 1e-6);
  cfg.trace = true;
  auto egm = solve_egm(p, cfg);
  auto sub = solve_subegm(p, cfg);
  auto tbfm = solve_tbfm(p, cfg);
  CHECK(egm.iterations == sub.iterations);
  CHECK(egm.iterations == tbfm.iterations);
  REQUIRE(egm.trace.size() == sub.trace.size());
  REQUIRE(egm.trace.size() == tbfm.trace.size());
  for (std::size_t k = 0; k < egm.trace.size(); ++k) {
    CHECK(dist(egm.trace[k].x, sub.trace[k].x) == doctest::Approx(0.0));
    CHECK(dist(egm.trace[k].x, tbfm.trace[k].x) <= 1e-12);
  }
}

TEST_CASE("deterministic iteration counts on the skew problem") {
  // m = 500 rows of the deterministic suite; the full grid runs in the
  // acceptance binary.
  auto p = problem1(500);
  CHECK(solve(p, constant_cfg(Algorithm::PRG, 0.4)).iterations ==
        doctest::Approx(92).epsilon(0.05));
  CHECK(solve(p, constant_cfg(Algorithm::EGM, 0.4)).iterations ==
        doctest::Approx(129).epsilon(0.05));
  CHECK(solve(p, constant_cfg(Algorithm::SUBEGM, 0.4)).iterations ==
        doctest::Approx(129).epsilon(0.05));
  // Regression pin. On the whole space this scheme shares its characteristic
  // polynomial with the reflected iteration, so its count tracks PRG's.
  CHECK(solve(p, constant_cfg(Algorithm::SUBPM, 0.4)).iterations == 90);
}

TEST_CASE("adaptive stepsize follows the ratio rule") {
  // F(x) = x: the ratio is exactly alpha after the first step.
  auto line = testutil::identity_line();
  SolverConfig cfg;
  cfg.algorithm = Algorithm::PRG_ADAPT;
  cfg.alpha = 0.3;
  cfg.eps = 1e-8;
  auto rep = solve(line, cfg);
  CHECK(rep.heuristic);
  REQUIRE(rep.lambda_history.size() >= 3);
  // linear mapping: the probe and every later ratio give exactly alpha
  for (double lam : rep.lambda_history) {
    CHECK(lam == doctest::Approx(0.3));
  }

  // Constant mapping: zero numerator over a nonzero move caps at lambda_bar.
  auto flat = testutil::constant_map(Vector{1.0, -2.0});
  SolverConfig ccfg;
  ccfg.algorithm = Algorithm::PRG_ADAPT;
  ccfg.lambda_bar = 50.0;
  ccfg.max_iter = 4;
  auto crep = solve(flat, ccfg);
  REQUIRE(crep.lambda_history.size() >= 2);
  CHECK(crep.lambda_history[1] == doctest::Approx(50.0));
}

TEST_CASE("adaptive method homes in on the exponential problem's solution") {
  auto p = problem5();
  SolverConfig cfg;
  cfg.algorithm = Algorithm::PRG_ADAPT;
  cfg.alpha = 0.4;
  cfg.eps = 1e-3;
  auto rep = solve(p, cfg);
  CHECK(rep.terminated == Termination::Converged);
  CHECK(dist(rep.final_x, *p.solution) <= 1e-2);
}

TEST_CASE("non-finite iterates stall instead of looping") {
  // A wildly overscaled map on the exponential problem overflows quickly.
  auto p = problem5();
  auto blow = ProblemInstance{
      "blow",
      std::make_shared<Mapping>(5,
                                [&p](const Vector& x) {
                                  Vector f = p.eval(x);
                                  for (double& v : f) v *= 1e100;
                                  return f;
                                }),
      FeasibleSet::whole_space(5),
      std::nullopt,
      std::nullopt,
      Vector(5, 1.0)};
  SolverConfig cfg;
  cfg.algorithm = Algorithm::PRG_ADAPT;
  cfg.lambda_init = 1e200;
  cfg.max_iter = 50;
  auto rep = solve(blow, cfg);
  CHECK(rep.terminated == Termination::Stalled);
}

TEST_CASE("step differences vanish at termination") {
  // Average of the last 10 update steps stays below 10*eps on convergent runs.
  auto check_steps = [](const RunReport& rep, double eps) {
    REQUIRE(rep.trace.size() >= 2);
    double sum = 0.0;
    int count = 0;
    std::size_t first = rep.trace.size() > 10 ? rep.trace.size() - 10 : 1;
    for (std::size_t k = first; k < rep.trace.size(); ++k) {
      sum += dist(rep.trace[k].x, rep.trace[k - 1].x);
      ++count;
    }
    CHECK(sum / count <= 10.0 * eps);
  };

  auto p1 = problem1(50);
  SolverConfig cfg = constant_cfg(Algorithm::PRG, 0.4);
  cfg.trace = true;
  check_steps(solve(p1, cfg), cfg.eps);

  cfg = constant_cfg(Algorithm::EGM, 0.4);
  cfg.trace = true;
  check_steps(solve(p1, cfg), cfg.eps);

  SolverConfig scfg;
  scfg.algorithm = Algorithm::PRG_SAFE;
  scfg.eps = 1e-3;
  scfg.trace = true;
  check_steps(solve(problem4(5), scfg), scfg.eps);
}

TEST_CASE("concurrent runs on a shared instance keep per-run counters") {
  auto p = problem1(40);
  SolverConfig cfg = constant_cfg(Algorithm::PRG, 0.4);
  RunReport ref = solve(p, cfg);

  RunReport a, b;
  std::thread ta([&] { a = solve(p, cfg); });
  std::thread tb([&] { b = solve(p, cfg); });
  ta.join();
  tb.join();
  CHECK(a.iterations == ref.iterations);
  CHECK(b.iterations == ref.iterations);
  CHECK(a.np == ref.np);
  CHECK(b.np == ref.np);
  CHECK(dist(a.final_x, ref.final_x) == doctest::Approx(0.0));
  CHECK(dist(b.final_x, ref.final_x) == doctest::Approx(0.0));
}

TEST_CASE("max_iter is honored") {
  auto line = testutil::identity_line();
  SolverConfig cfg = constant_cfg(Algorithm::PRG, 0.4, 1e-300);
  cfg.max_iter = 25;
  auto rep = solve(line, cfg);
  CHECK(rep.terminated == Termination::MaxIter);
  CHECK(rep.iterations == 25);
}

TEST_CASE("algorithm names round-trip") {
  for (Algorithm a : {Algorithm::PRG, Algorithm::PRG_ADAPT, Algorithm::PRG_SAFE,
                      Algorithm::EGM, Algorithm::SUBEGM, Algorithm::TBFM,
                      Algorithm::SUBPM}) {
    CHECK(algorithm_from_name(algorithm_name(a)) == a);
  }
  CHECK(algorithm_from_name("prg-safe") == Algorithm::PRG_SAFE);
  CHECK_THROWS_AS(algorithm_from_name("newton"), std::invalid_argument);
}

}  // TEST_SUITE
