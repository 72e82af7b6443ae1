#include "vibench/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vibench {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

RateConstants rate_constants(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("rate_constants: alpha must lie in (0, 1)");
  }
  double root = std::sqrt(1.0 + 4.0 * alpha * alpha);
  return RateConstants{(1.0 - 2.0 * alpha + root) / 2.0,
                       (-1.0 + 2.0 * alpha + root) / 2.0, alpha};
}

RecursionCheck verify_rate_recursion(const std::vector<double>& a,
                                     const std::vector<double>& b, double alpha,
                                     double beta) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("verify_rate_recursion: need at least two entries");
  }
  if (a.size() != b.size()) {
    throw std::invalid_argument("verify_rate_recursion: sequence lengths differ");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || b[i] < 0.0 || !std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw std::invalid_argument("verify_rate_recursion: sequences must be nonnegative");
    }
  }
  RateConstants rc = rate_constants(alpha);
  if (!(beta > 0.0) || !(beta <= rc.gamma)) {
    throw std::invalid_argument("verify_rate_recursion: beta must lie in (0, gamma(alpha)]");
  }

  const std::size_t n = a.size();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    double rhs = (1.0 - 2.0 * alpha) * a[k] + alpha * a[k - 1] + beta * b[k];
    double slack = 1e-9 * (std::abs(rhs) + a[k + 1] + b[k + 1] + 1e-300);
    if (a[k + 1] + b[k + 1] > rhs + slack) {
      return RecursionCheck{false, static_cast<long>(k)};
    }
  }

  double big_m = a[1] + rc.delta * a[0] + b[1];
  double bound = big_m;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    bound *= rc.gamma;  // gamma^k M
    if (a[k + 1] > bound * (1.0 + 1e-9) + 1e-300) {
      return RecursionCheck{false, static_cast<long>(k + 1)};
    }
  }
  return RecursionCheck{true, -1};
}

RlinearFit fit_rlinear(const std::vector<double>& errors) {
  if (errors.size() < 10) {
    throw std::invalid_argument("fit_rlinear: need at least 10 entries");
  }
  std::vector<double> logs(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0)) {
      throw std::invalid_argument("fit_rlinear: errors must be positive");
    }
    logs[i] = std::log(errors[i]);
  }
  const double n = static_cast<double>(errors.size());
  double x_mean = (n - 1.0) / 2.0;
  double y_mean = 0.0;
  for (double v : logs) y_mean += v;
  y_mean /= n;

  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    double dx = static_cast<double>(i) - x_mean;
    sxy += dx * (logs[i] - y_mean);
    sxx += dx * dx;
  }
  double slope = sxy / sxx;
  double intercept = y_mean - slope * x_mean;

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    double fit = intercept + slope * static_cast<double>(i);
    ss_res += (logs[i] - fit) * (logs[i] - fit);
    ss_tot += (logs[i] - y_mean) * (logs[i] - y_mean);
  }
  double rsq = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return RlinearFit{std::exp(slope), rsq};
}

namespace {

// Iterate views over a trace: x_k, y_k and lambda_k with x_0 from the report.
struct TraceView {
  const RunReport& rep;

  std::size_t passes() const { return rep.trace.size(); }
  const Vector& x(std::size_t k) const {  // x_k
    return k == 0 ? rep.trace_x0 : rep.trace[k - 1].x;
  }
  const Vector& y(std::size_t k) const { return rep.trace[k].y; }
  double lambda(std::size_t k) const { return rep.trace[k].lambda; }
};

}  // namespace

long audit_descent(const RunReport& report, const ProblemInstance& problem,
                   double lambda, double tol) {
  if (report.trace.size() < 2 || report.trace_x0.empty()) {
    throw std::invalid_argument("audit_descent: trace with >= 2 records required");
  }
  if (!problem.solution) {
    throw std::invalid_argument("audit_descent: problem has no known solution");
  }
  if (!problem.lipschitz) {
    throw std::invalid_argument("audit_descent: problem has no known Lipschitz constant");
  }
  const Vector& z = *problem.solution;
  const double ll = lambda * *problem.lipschitz;
  const Vector f_z = problem.eval(z);
  TraceView tv{report};

  long violations = 0;
  for (std::size_t n = 1; n < tv.passes(); ++n) {
    double lhs = dist(tv.x(n + 1), z);
    double xz = dist(tv.x(n), z);
    double dxx = dist(tv.x(n), tv.x(n - 1));
    double xyp = dist(tv.x(n), tv.y(n - 1));
    double xny = dist(tv.x(n + 1), tv.y(n));
    double zterm = 2.0 * lambda * inner(f_z, subtract(tv.y(n), z));
    double rhs = xz * xz - (1.0 - ll * (1.0 + kSqrt2)) * dxx * dxx + ll * xyp * xyp -
                 (1.0 - kSqrt2 * ll) * xny * xny - zterm;
    if (lhs * lhs > rhs + tol) ++violations;
  }
  return violations;
}

long audit_safe_descent(const RunReport& report, const ProblemInstance& problem,
                        double alpha, const Vector& z, double tol) {
  if (report.trace.size() < 2 || report.trace_x0.empty()) {
    throw std::invalid_argument("audit_safe_descent: trace with >= 2 records required");
  }
  const Vector f_z = problem.eval(z);
  TraceView tv{report};

  long violations = 0;
  for (std::size_t n = 1; n < tv.passes(); ++n) {
    double lhs = dist(tv.x(n + 1), z);
    double xz = dist(tv.x(n), z);
    double xy = dist(tv.x(n), tv.y(n));
    double xny = dist(tv.x(n + 1), tv.y(n));
    double xyp = dist(tv.x(n), tv.y(n - 1));
    double zterm = 2.0 * tv.lambda(n) * inner(f_z, subtract(tv.y(n), z));
    double rhs = xz * xz - (1.0 - alpha * (1.0 + kSqrt2)) * xy * xy -
                 (1.0 - kSqrt2 * alpha) * xny * xny + alpha * xyp * xyp - zterm;
    if (lhs * lhs > rhs + tol) ++violations;
  }
  return violations;
}

}  // namespace vibench
