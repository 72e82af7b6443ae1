#include "vibench/problems.hpp"

#include <cmath>
#include <utility>

#include "vibench/rng.hpp"

namespace vibench {

Mapping::Mapping(int dim, std::function<Vector(const Vector&)> fn)
    : dim_(dim), fn_(std::move(fn)) {
  if (dim_ < 1) throw std::invalid_argument("Mapping: dim must be >= 1");
  if (!fn_) throw std::invalid_argument("Mapping: empty evaluator");
}

Vector Mapping::operator()(const Vector& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("Mapping: input dimension mismatch");
  }
  evals_.fetch_add(1, std::memory_order_relaxed);
  Vector out = fn_(x);
  if (static_cast<int>(out.size()) != dim_) {
    throw std::logic_error("Mapping: evaluator changed dimension");
  }
  return out;
}

ProblemInstance problem1(int m) {
  if (m < 2 || m % 2 != 0) {
    throw std::invalid_argument("problem1: m must be even and >= 2");
  }
  const int half = m / 2;
  auto fn = [m, half](const Vector& x) {
    Vector out(m);
    for (int i = 0; i < m; ++i) {
      int j = m - 1 - i;  // secondary diagonal
      out[i] = (i < half) ? -x[j] : x[j];
    }
    return out;
  };
  return ProblemInstance{"p1",
                         std::make_shared<Mapping>(m, fn),
                         FeasibleSet::whole_space(m),
                         1.0,
                         Vector(m, 0.0),
                         Vector(m, 1.0)};
}

Problem2Data problem2_data(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("problem2: m must be >= 1");
  SplitMix64 rng(seed);
  const int m = dim;

  Matrix a(m, Vector(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a[i][j] = rng.next_uniform(-5.0, 5.0);

  // Skew part: B = U - U^T keeps entries inside (-5, 5).
  Matrix u(m, Vector(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) u[i][j] = rng.next_uniform(-2.5, 2.5);

  Vector d(m);
  for (int i = 0; i < m; ++i) d[i] = rng.next_uniform(0.0, 0.3);

  Vector q(m);
  for (int i = 0; i < m; ++i) q[i] = rng.next_uniform(-500.0, 0.0);

  Matrix mat(m, Vector(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      mat[i][j] = inner(a[i], a[j]) + u[i][j] - u[j][i];
    }
    mat[i][i] += d[i];
  }
  return Problem2Data{std::move(mat), std::move(q)};
}

ProblemInstance problem2(int m, std::uint64_t seed) {
  auto data = std::make_shared<Problem2Data>(problem2_data(m, seed));
  double lipschitz = spectral_norm(data->m);
  auto fn = [data](const Vector& x) {
    Vector out = matvec(data->m, x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += data->q[i];
    return out;
  };
  return ProblemInstance{"p2",
                         std::make_shared<Mapping>(m, fn),
                         FeasibleSet::scaled_simplex(m, static_cast<double>(m)),
                         lipschitz,
                         std::nullopt,
                         Vector(m, 1.0)};
}

ProblemInstance problem3() {
  auto fn = [](const Vector& x) {
    double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    return Vector{3.0 * x1 * x1 + 2.0 * x1 * x2 + 2.0 * x2 * x2 + x3 + 3.0 * x4 - 6.0,
                  2.0 * x1 * x1 + x1 + x2 * x2 + 10.0 * x3 + 2.0 * x4 - 2.0,
                  3.0 * x1 * x1 + x1 * x2 + 2.0 * x2 * x2 + 2.0 * x3 + 9.0 * x4 - 9.0,
                  x1 * x1 + 3.0 * x2 * x2 + 2.0 * x3 + 3.0 * x4 - 3.0};
  };
  return ProblemInstance{"p3",
                         std::make_shared<Mapping>(4, fn),
                         FeasibleSet::scaled_simplex(4, 4.0),
                         std::nullopt,
                         Vector{1.225, 0.0, 0.0, 2.775},
                         Vector(4, 1.0)};
}

ProblemInstance problem4(int m) {
  if (m < 1) throw std::invalid_argument("problem4: m must be >= 1");
  auto fn = [m](const Vector& x) {
    Vector out(m);
    auto at = [&x, m](int i) { return (i < 0 || i >= m) ? 0.0 : x[i]; };
    for (int i = 0; i < m; ++i) {
      double xm = at(i - 1), xi = x[i], xp = at(i + 1);
      double f1 = xm * xm + xi * xi + xm * xi + xi * xp;
      double f2 = 4.0 * xi + xm - 2.0 * xp - 1.0;
      out[i] = f1 + f2;
    }
    return out;
  };
  return ProblemInstance{"p4",
                         std::make_shared<Mapping>(m, fn),
                         FeasibleSet::nonneg_orthant(m),
                         std::nullopt,
                         std::nullopt,
                         Vector(m, 0.0)};
}

ProblemInstance problem5() {
  auto fn = [](const Vector& x) {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) {
      double d = x[k] - static_cast<double>(k) + 1.0;  // x_i - i + 2, 1-based i
      s += d * d;
    }
    double e = std::exp(s);
    Vector out(5);
    for (int k = 0; k < 5; ++k) {
      out[k] = 2.0 * (x[k] - static_cast<double>(k) + 1.0) * e;
    }
    return out;
  };
  return ProblemInstance{"p5",
                         std::make_shared<Mapping>(5, fn),
                         FeasibleSet::whole_space(5),
                         std::nullopt,
                         Vector{-1.0, 0.0, 1.0, 2.0, 3.0},
                         Vector(5, 1.0)};
}

ProblemInstance make_problem(const std::string& name, int m, std::uint64_t seed) {
  if (name == "p1") return problem1(m);
  if (name == "p2") return problem2(m, seed);
  if (name == "p3") {
    if (m != 0 && m != 4) throw std::invalid_argument("p3 is 4-dimensional");
    return problem3();
  }
  if (name == "p4") return problem4(m);
  if (name == "p5") {
    if (m != 0 && m != 5) throw std::invalid_argument("p5 is 5-dimensional");
    return problem5();
  }
  throw std::invalid_argument("unknown problem '" + name + "' (expected p1..p5)");
}

Vector matvec(const Matrix& m, const Vector& x) {
  Vector out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = inner(m[i], x);
  return out;
}

double spectral_norm(const Matrix& m) {
  const int n = static_cast<int>(m.size());
  if (n < 1) throw std::invalid_argument("spectral_norm: empty matrix");
  for (const Vector& row : m) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("spectral_norm: matrix must be square");
    }
    ensure_finite(row, "spectral_norm");
  }

  constexpr int kCap = 10000;
  constexpr double kRelTol = 1e-8;

  auto apply_mtm = [&m, n](const Vector& v) {
    Vector mv = matvec(m, v);
    Vector out(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out[j] += m[i][j] * mv[i];
    }
    return out;
  };

  // Start vectors: normalized ones, then each basis vector. If M v = 0 for
  // the ones vector and every e_j, the matrix is zero.
  int start_index = -1;
  auto next_start = [&]() -> Vector {
    ++start_index;
    if (start_index == 0) return Vector(n, 1.0 / std::sqrt(static_cast<double>(n)));
    if (start_index <= n) {
      Vector e(n, 0.0);
      e[start_index - 1] = 1.0;
      return e;
    }
    return {};
  };

  Vector v = next_start();
  double est = 0.0, prev_est = -1.0, best = 0.0;
  for (int iter = 0; iter < kCap; ++iter) {
    Vector w = apply_mtm(v);
    est = inner(v, w);  // ||v|| = 1, so this is the Rayleigh quotient
    best = std::max(best, est);
    double wn = norm(w);
    if (wn <= 1e-150) {  // stagnation: v in the kernel of M^T M
      v = next_start();
      if (v.empty()) return 0.0;
      prev_est = -1.0;
      continue;
    }
    if (prev_est >= 0.0 && std::abs(est - prev_est) <= kRelTol * std::max(est, 1e-300)) {
      return std::sqrt(std::max(est, 0.0));
    }
    prev_est = est;
    for (int i = 0; i < n; ++i) v[i] = w[i] / wn;
  }
  throw SpectralNormError("spectral_norm: iteration cap reached", std::sqrt(std::max(best, 0.0)));
}

}  // namespace vibench
