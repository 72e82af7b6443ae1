#pragma once

#include <vector>

#include "vibench/solvers.hpp"

namespace vibench {

// Closed-form contraction pair for the two-term rate recursion:
//   gamma = (1 - 2a + sqrt(1 + 4a^2)) / 2,
//   delta = (-1 + 2a + sqrt(1 + 4a^2)) / 2,
// with gamma in (0,1) strictly decreasing in a and gamma * delta = a.
struct RateConstants {
  double gamma;
  double delta;
  double alpha;
};

RateConstants rate_constants(double alpha);

struct RecursionCheck {
  bool ok;
  long first_violation;  // -1 when ok
};

// Checks a_{n+1} + b_{n+1} <= (1-2a) a_n + a a_{n-1} + b b_n at every index,
// and then the geometric conclusion a_{n+1} <= gamma^n M with
// M = a_1 + delta a_0 + b_1 (the bound the recursion actually yields).
RecursionCheck verify_rate_recursion(const std::vector<double>& a,
                                     const std::vector<double>& b, double alpha,
                                     double beta);

struct RlinearFit {
  double ratio;
  double rsquared;
};

// Least-squares fit of log(error_n) against n; ratio = exp(slope).
RlinearFit fit_rlinear(const std::vector<double>& errors);

// Per-iteration descent inequality audit for constant-stepsize reflected
// runs; z and L are taken from the problem instance. Returns the number of
// violated iterations (expected 0). Requires a trace with >= 2 records.
long audit_descent(const RunReport& report, const ProblemInstance& problem,
                   double lambda, double tol = 1e-9);

// Same idea for safeguarded runs, with alpha in place of lambda*L and the
// per-iteration stepsizes from the trace. z is passed explicitly so problems
// without a stored solution can be audited against a tightly solved point.
long audit_safe_descent(const RunReport& report, const ProblemInstance& problem,
                        double alpha, const Vector& z, double tol = 1e-8);

}  // namespace vibench
