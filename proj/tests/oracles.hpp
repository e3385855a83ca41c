#pragma once

// Reference values used by the unit and acceptance tests. Nothing here calls
// into the library's differentiation or linear algebra.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "finsler/point.hpp"

namespace oracle {

inline finsler::TangentPoint z1() { return finsler::TangentPoint({0, 0, 1}, {1, 2, 2}); }

inline constexpr const char* kCounterexample = "sqrt(x3*y1*sqrt(y2^2+y3^2))";

/// Uniform draw from the region x3, y1 in [0.5, 2], y2, y3 in [-2, 2] with
/// y2^2 + y3^2 > 0.1; x1, x2 in [-1, 1].
inline finsler::TangentPoint counterexample_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.5, 2.0);
  std::uniform_real_distribution<double> sym(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  while (true) {
    const double x1 = unit(rng), x2 = unit(rng), x3 = pos(rng);
    const double y1 = pos(rng), y2 = sym(rng), y3 = sym(rng);
    if (y2 * y2 + y3 * y3 > 0.1) return finsler::TangentPoint({x1, x2, x3}, {y1, y2, y3});
  }
}

/// y components bounded away from zero, so quartic and quadratic metrics stay
/// nondegenerate; x in [-0.5, 0.5]^3.
inline finsler::TangentPoint generic_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.3, 2.0);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  std::bernoulli_distribution flip(0.5);
  std::vector<double> x(3), y(3);
  for (int i = 0; i < 3; ++i) {
    x[i] = unit(rng);
    y[i] = flip(rng) ? -mag(rng) : mag(rng);
  }
  return finsler::TangentPoint(x, y);
}

/// Barthel coefficients N^i_j of the counterexample, (i, j) 0-based.
inline std::array<std::array<double, 3>, 3> paper_barthel(const finsler::TangentPoint& z) {
  const double x3 = z.x[2], y2 = z.y[1], y3 = z.y[2];
  std::array<std::array<double, 3>, 3> n{};
  n[1][1] = y3 / x3;
  n[1][2] = y2 / x3;
  n[2][1] = -y2 / x3;
  n[2][2] = y3 / x3;
  return n;
}

/// All 81 components R^h_ijk, flattened (h, i, j, k) row-major.
inline std::vector<double> paper_curvature(const finsler::TangentPoint& z) {
  const double x3 = z.x[2], y1 = z.y[0], y2 = z.y[1], y3 = z.y[2];
  const double q = y2 * y2 + y3 * y3;
  const double s = 2.0 * x3 * x3;
  std::vector<double> r(81, 0.0);
  auto set = [&](int h, int i, double v) {
    // R^h_i23 = v and R^h_i32 = -v, 1-based h and i.
    r[(((h - 1) * 3 + (i - 1)) * 3 + 1) * 3 + 2] = v;
    r[(((h - 1) * 3 + (i - 1)) * 3 + 2) * 3 + 1] = -v;
  };
  set(1, 2, y1 * y3 / (s * q));
  set(1, 3, -y1 * y2 / (s * q));
  set(2, 1, -y3 / (s * y1));
  set(2, 3, -1.0 / s);
  set(3, 1, y2 / (s * y1));
  set(3, 2, 1.0 / s);
  return r;
}

inline std::vector<double> paper_kernel_direction(const finsler::TangentPoint& z) {
  return {1.0, -z.y[1] / z.y[0], -z.y[2] / z.y[0]};
}

/// |a - e| / |e|, or |a| when e is zero.
inline double rel_error(double actual, double expected) {
  return expected == 0.0 ? std::fabs(actual) : std::fabs(actual - expected) / std::fabs(expected);
}

/// Component check used by the reproduction criteria: relative `rel` against
/// nonzero references, absolute `abs_zero` against zero ones.
inline bool matches(double actual, double expected, double rel, double abs_zero) {
  return expected == 0.0 ? std::fabs(actual) <= abs_zero
                         : std::fabs(actual - expected) <= rel * std::fabs(expected);
}

/// Christoffel symbols of a_ij = delta_ij / sigma^2, sigma = 1 + c/4 |x|^2,
/// flattened (i, j, k). For a conformally flat metric e^{2u} delta,
/// Gamma^i_jk = delta^i_j u_k + delta^i_k u_j - delta_jk u_i with u = -log sigma.
inline std::vector<double> conformal_christoffel(double c, const std::vector<double>& x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double sigma = 1.0 + 0.25 * c * r2;
  std::array<double, 3> u{};
  for (int i = 0; i < 3; ++i) u[i] = -0.5 * c * x[i] / sigma;
  std::vector<double> g(27, 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        g[(i * 3 + j) * 3 + k] = (i == j ? u[k] : 0.0) + (i == k ? u[j] : 0.0) - (j == k ? u[i] : 0.0);
      }
    }
  }
  return g;
}

/// Riemann tensor of the same metric in the library's index order:
/// R^h_ijk = c (delta^h_k a_ij - delta^h_j a_ik).
inline std::vector<double> conformal_riemann(double c, const std::vector<double>& x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double sigma = 1.0 + 0.25 * c * r2;
  const double a = 1.0 / (sigma * sigma);
  std::vector<double> r(81, 0.0);
  for (int h = 0; h < 3; ++h) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          r[((h * 3 + i) * 3 + j) * 3 + k] =
              c * ((h == k && i == j ? a : 0.0) - (h == j && i == k ? a : 0.0));
        }
      }
    }
  }
  return r;
}

/// Null space by Gaussian elimination with full pivoting; pivots whose
/// magnitude is <= rel_tol * (largest entry) end the elimination. Returns an
/// orthonormal basis (modified Gram-Schmidt on the free-variable solutions).
inline std::vector<std::vector<double>> elimination_nullspace(std::vector<double> a, int rows, int cols,
                                                              double rel_tol) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::fabs(v));
  const double tol = rel_tol * (scale > 0.0 ? scale : 1.0);

  std::vector<int> perm(cols);
  for (int c = 0; c < cols; ++c) perm[c] = c;
  auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * cols + c]; };

  int rank = 0;
  for (; rank < std::min(rows, cols); ++rank) {
    int pr = rank, pc = rank;
    double best = 0.0;
    for (int r = rank; r < rows; ++r) {
      for (int c = rank; c < cols; ++c) {
        if (std::fabs(at(r, c)) > best) {
          best = std::fabs(at(r, c));
          pr = r;
          pc = c;
        }
      }
    }
    if (best <= tol) break;
    for (int c = 0; c < cols; ++c) std::swap(at(rank, c), at(pr, c));
    for (int r = 0; r < rows; ++r) std::swap(at(r, rank), at(r, pc));
    std::swap(perm[rank], perm[pc]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const double f = at(r, rank) / at(rank, rank);
      for (int c = rank; c < cols; ++c) at(r, c) -= f * at(rank, c);
    }
  }

  std::vector<std::vector<double>> basis;
  for (int free = rank; free < cols; ++free) {
    std::vector<double> v(cols, 0.0);
    v[perm[free]] = 1.0;
    for (int r = 0; r < rank; ++r) v[perm[r]] = -at(r, free) / at(r, r);
    for (const auto& b : basis) {
      double d = 0.0;
      for (int i = 0; i < cols; ++i) d += b[i] * v[i];
      for (int i = 0; i < cols; ++i) v[i] -= d * b[i];
    }
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    for (double& c : v) c /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Largest principal angle between two subspaces of equal dimension, from the
/// spectral norm of the difference of orthogonal projectors (= sin of the
/// largest angle). Computed by power iteration on the symmetric difference.
inline double max_angle(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b,
                        int n) {
  std::vector<double> d(static_cast<std::size_t>(n * n), 0.0);
  for (const auto& v : a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d[i * n + j] += v[i] * v[j];
    }
  }
  for (const auto& v : b) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d[i * n + j] -= v[i] * v[j];
    }
  }
  // ||D||_2 equals sqrt of the largest eigenvalue of D^2; D^2 is PSD.
  std::vector<double> d2(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) d2[i * n + j] += d[i * n + k] * d[k * n + j];
    }
  }
  double frob = 0.0;
  for (double v : d2) frob += v * v;
  if (frob == 0.0) return 0.0;
  std::vector<double> v(n, 1.0);
  for (int i = 0; i < n; ++i) v[i] += 0.1 * i;
  double lambda = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<double> w(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) w[i] += d2[i * n + j] * v[j];
    }
    double norm = 0.0;
    for (double c : w) norm += c * c;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
    lambda = norm;
  }
  return std::asin(std::min(1.0, std::sqrt(lambda)));
}

inline std::vector<std::vector<double>> span_of(std::vector<double> v) {
  double norm = 0.0;
  for (double c : v) norm += c * c;
  norm = std::sqrt(norm);
  for (double& c : v) c /= norm;
  return {v};
}

}  // namespace oracle
