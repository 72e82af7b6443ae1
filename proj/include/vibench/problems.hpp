#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "vibench/geometry.hpp"

namespace vibench {

// Mapping evaluator with a monotone invocation counter. The counter is
// atomic so an instance can be shared read-only across concurrent runs;
// solvers additionally keep run-local tallies for their reports.
class Mapping {
 public:
  Mapping(int dim, std::function<Vector(const Vector&)> fn);

  Vector operator()(const Vector& x) const;
  int dim() const { return dim_; }
  std::uint64_t eval_count() const { return evals_.load(std::memory_order_relaxed); }

 private:
  int dim_;
  std::function<Vector(const Vector&)> fn_;
  mutable std::atomic<std::uint64_t> evals_{0};
};

struct ProblemInstance {
  std::string name;
  std::shared_ptr<Mapping> mapping;
  FeasibleSet set;
  std::optional<double> lipschitz;
  std::optional<Vector> solution;
  Vector start;

  int dim() const { return mapping->dim(); }
  Vector eval(const Vector& x) const { return (*mapping)(x); }
  std::uint64_t eval_count() const { return mapping->eval_count(); }
};

// F(x) = Ax with A the anti-diagonal sign matrix (-1 on the top half of the
// secondary diagonal, +1 on the bottom half). Skew and orthogonal, so L = 1
// and for even m the zero vector solves the problem. C is the whole space.
ProblemInstance problem1(int m);

// F(x) = Mx + q on the scaled simplex {x >= 0 | sum x = m} with
// M = A A^T + B + D positive definite; generation is fully determined by the
// seed. L is the spectral norm of M.
ProblemInstance problem2(int m, std::uint64_t seed);

// Kojima-Shindo nonlinear complementarity problem, m = 4, on the simplex
// {x >= 0 | sum x = 4}. Known (approximate) solution (1.225, 0, 0, 2.775).
ProblemInstance problem3();

// Sun's quadratic test mapping F = F1 + F2 on the nonnegative orthant.
ProblemInstance problem4(int m);

// Kanzow's exponential mapping on R^5; F is the gradient of
// exp(sum_k (x_k - k + 2)^2) with solution (-1, 0, 1, 2, 3).
ProblemInstance problem5();

// Selection by name "p1".."p5". m and seed are ignored where fixed by the
// problem (m may be 0 to take the problem's natural size).
ProblemInstance make_problem(const std::string& name, int m, std::uint64_t seed);

using Matrix = std::vector<Vector>;  // dense, row-major

Vector matvec(const Matrix& m, const Vector& x);

struct Problem2Data {
  Matrix m;
  Vector q;
};

// Raw matrix/vector data behind problem2, exposed for reproducibility tests.
// Stream order: A row-major, then U (skew part B = U - U^T), then diag(D),
// then q, all from one SplitMix64 stream seeded with `seed`.
Problem2Data problem2_data(int dim, std::uint64_t seed);

class SpectralNormError : public std::runtime_error {
 public:
  SpectralNormError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_(best_estimate) {}
  double best_estimate() const { return best_; }

 private:
  double best_;
};

// Largest singular value via power iteration on M^T M; relative tolerance
// 1e-8, iteration cap 10000, deterministic start (1,..,1)/sqrt(m) with
// restart over basis vectors when the iterate falls in the kernel. Throws
// SpectralNormError carrying the best estimate if the cap is reached.
double spectral_norm(const Matrix& m);

}  // namespace vibench
