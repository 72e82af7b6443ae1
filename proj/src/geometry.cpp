#include "vibench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace vibench {

namespace {
thread_local std::uint64_t tls_projection_count = 0;
}

bool all_finite(const Vector& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void ensure_finite(const Vector& x, const char* what) {
  if (!all_finite(x)) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

void ensure_same_dim(const Vector& x, const Vector& y, const char* what) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
}

double inner(const Vector& x, const Vector& y) {
  ensure_same_dim(x, y, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(const Vector& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dist(const Vector& x, const Vector& y) {
  ensure_same_dim(x, y, "dist");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double kahan_sum(const Vector& x) {
  double sum = 0.0, comp = 0.0;
  for (double v : x) {
    double t = v - comp;
    double next = sum + t;
    comp = (next - sum) - t;
    sum = next;
  }
  return sum;
}

Vector subtract(const Vector& x, const Vector& y) {
  ensure_same_dim(x, y, "subtract");
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

Vector add_scaled(const Vector& x, double a, const Vector& y) {
  ensure_same_dim(x, y, "add_scaled");
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + a * y[i];
  return z;
}

Vector combine(double a, const Vector& x, double b, const Vector& y) {
  ensure_same_dim(x, y, "combine");
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = a * x[i] + b * y[i];
  return z;
}

Vector project_simplex(double total, const Vector& x) {
  if (!(total > 0.0)) throw std::invalid_argument("project_simplex: total must be positive");
  if (x.empty()) throw std::invalid_argument("project_simplex: empty input");
  ensure_finite(x, "project_simplex");

  Vector sorted = x;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  // Largest k with sorted[k-1] - (prefix_k - total)/k > 0; tau is that offset.
  double prefix = 0.0, comp = 0.0;
  double tau = (kahan_sum(x) - total) / static_cast<double>(x.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double t = sorted[i] - comp;
    double next = prefix + t;
    comp = (next - prefix) - t;
    prefix = next;
    double cand = (prefix - total) / static_cast<double>(i + 1);
    if (sorted[i] - cand > 0.0) tau = cand;
  }

  Vector p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::max(x[i] - tau, 0.0);
  return p;
}

Vector project_halfspace(const Vector& normal, double offset, const Vector& x) {
  ensure_same_dim(normal, x, "project_halfspace");
  ensure_finite(x, "project_halfspace");
  double nn = inner(normal, normal);
  if (nn == 0.0) return x;
  double excess = inner(normal, x) - offset;
  if (excess <= 0.0) return x;
  return add_scaled(x, -excess / nn, normal);
}

FeasibleSet FeasibleSet::whole_space(int dim) {
  if (dim < 1) throw std::invalid_argument("FeasibleSet: dim must be >= 1");
  return FeasibleSet(Kind::WholeSpace, dim);
}

FeasibleSet FeasibleSet::nonneg_orthant(int dim) {
  if (dim < 1) throw std::invalid_argument("FeasibleSet: dim must be >= 1");
  return FeasibleSet(Kind::NonnegOrthant, dim);
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  ensure_same_dim(lower, upper, "FeasibleSet::box");
  if (lower.empty()) throw std::invalid_argument("FeasibleSet::box: dim must be >= 1");
  ensure_finite(lower, "FeasibleSet::box lower");
  ensure_finite(upper, "FeasibleSet::box upper");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) throw std::invalid_argument("FeasibleSet::box: lower > upper");
  }
  FeasibleSet s(Kind::Box, static_cast<int>(lower.size()));
  s.a_ = std::move(lower);
  s.b_ = std::move(upper);
  return s;
}

FeasibleSet FeasibleSet::scaled_simplex(int dim, double total) {
  if (dim < 1) throw std::invalid_argument("FeasibleSet: dim must be >= 1");
  if (!(total > 0.0)) throw std::invalid_argument("FeasibleSet::scaled_simplex: total must be positive");
  FeasibleSet s(Kind::ScaledSimplex, dim);
  s.scalar_ = total;
  return s;
}

FeasibleSet FeasibleSet::halfspace(Vector normal, double offset) {
  if (normal.empty()) throw std::invalid_argument("FeasibleSet: dim must be >= 1");
  ensure_finite(normal, "FeasibleSet::halfspace normal");
  if (!std::isfinite(offset)) throw std::invalid_argument("FeasibleSet::halfspace: non-finite offset");
  if (norm(normal) == 0.0) throw std::invalid_argument("FeasibleSet::halfspace: zero normal");
  FeasibleSet s(Kind::Halfspace, static_cast<int>(normal.size()));
  s.scalar_ = offset;
  s.a_ = std::move(normal);
  return s;
}

Vector FeasibleSet::project(const Vector& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("FeasibleSet::project: dimension mismatch");
  }
  ensure_finite(x, "FeasibleSet::project");
  ++tls_projection_count;
  switch (kind_) {
    case Kind::WholeSpace:
      return x;
    case Kind::NonnegOrthant: {
      Vector p(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::max(x[i], 0.0);
      return p;
    }
    case Kind::Box: {
      Vector p(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::clamp(x[i], a_[i], b_[i]);
      return p;
    }
    case Kind::ScaledSimplex:
      return project_simplex(scalar_, x);
    case Kind::Halfspace:
      return project_halfspace(a_, scalar_, x);
  }
  throw std::logic_error("FeasibleSet::project: unknown kind");
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (static_cast<int>(x.size()) != dim_ || !all_finite(x)) return false;
  switch (kind_) {
    case Kind::WholeSpace:
      return true;
    case Kind::NonnegOrthant:
      for (double v : x) {
        if (v < -tol) return false;
      }
      return true;
    case Kind::Box:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < a_[i] - tol || x[i] > b_[i] + tol) return false;
      }
      return true;
    case Kind::ScaledSimplex: {
      for (double v : x) {
        if (v < -tol) return false;
      }
      return std::abs(kahan_sum(x) - scalar_) <= tol * std::max(1.0, std::abs(scalar_));
    }
    case Kind::Halfspace:
      return inner(a_, x) - scalar_ <= tol;
  }
  return false;
}

std::uint64_t projection_count() { return tls_projection_count; }

}  // namespace vibench
