#pragma once

#include <cstdint>
#include <vector>

namespace vibench {

// Dense finite-dimensional point. Dimension is the length; entries are
// validated for finiteness at API boundaries rather than per construction.
using Vector = std::vector<double>;

bool all_finite(const Vector& x);
void ensure_finite(const Vector& x, const char* what);
void ensure_same_dim(const Vector& x, const Vector& y, const char* what);

double inner(const Vector& x, const Vector& y);
double norm(const Vector& x);
double dist(const Vector& x, const Vector& y);

// Compensated (Kahan) sum; keeps simplex feasibility checks tight at
// dimensions in the thousands.
double kahan_sum(const Vector& x);

Vector subtract(const Vector& x, const Vector& y);
// x + a*y
Vector add_scaled(const Vector& x, double a, const Vector& y);
// a*x + b*y
Vector combine(double a, const Vector& x, double b, const Vector& y);

// Exact projection onto {p >= 0 | sum(p) = total} by sort-and-threshold.
Vector project_simplex(double total, const Vector& x);

// Closed-form projection onto {w | <normal, w> <= offset}. A zero normal is
// treated as the whole space (the projection is the identity); solvers rely
// on this for degenerate separating halfspaces.
Vector project_halfspace(const Vector& normal, double offset, const Vector& x);

class FeasibleSet {
 public:
  enum class Kind { WholeSpace, NonnegOrthant, Box, ScaledSimplex, Halfspace };

  static FeasibleSet whole_space(int dim);
  static FeasibleSet nonneg_orthant(int dim);
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet scaled_simplex(int dim, double total);
  static FeasibleSet halfspace(Vector normal, double offset);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double simplex_total() const { return scalar_; }
  double halfspace_offset() const { return scalar_; }
  const Vector& box_lower() const { return a_; }
  const Vector& box_upper() const { return b_; }
  const Vector& halfspace_normal() const { return a_; }

  // Euclidean nearest point. Counts into the thread-local projection tally.
  Vector project(const Vector& x) const;
  bool contains(const Vector& x, double tol = 1e-12) const;

 private:
  FeasibleSet(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  double scalar_ = 0.0;  // simplex total / halfspace offset
  Vector a_, b_;         // box bounds / halfspace normal
};

// Thread-local count of FeasibleSet::project calls. A solver run is
// sequential on one thread, so the delta across a run equals its np.
std::uint64_t projection_count();

}  // namespace vibench
