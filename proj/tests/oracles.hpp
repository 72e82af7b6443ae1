// Test-only reference implementations, deliberately independent of the
// library's own algorithms: brute-force projections, a Jacobi eigensolver
// for singular values, and finite differences.
#pragma once

#include <functional>

#include "vibench/problems.hpp"
#include "vibench/rng.hpp"

namespace oracle {

using vibench::Matrix;
using vibench::Vector;

// Exact simplex projection by enumerating every nonzero support set;
// practical for dim <= ~16.
Vector project_simplex_enum(double total, const Vector& x);

// Nearest point on the 2-simplex over a dense parameter grid.
Vector project_simplex_grid2(double total, const Vector& x, int steps);

// Largest singular value via cyclic Jacobi on M^T M.
double spectral_norm_jacobi(const Matrix& m);

// Central finite-difference gradient.
Vector fd_gradient(const std::function<double(const Vector&)>& g, const Vector& x,
                   double h);

Vector random_vector(vibench::SplitMix64& rng, int dim, double lo, double hi);

}  // namespace oracle
