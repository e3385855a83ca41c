#include "finsler/distributions.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace finsler {

namespace {

void normalize_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
  }
  if (!v.empty() && v[arg] < 0.0) {
    for (double& c : v) c = -c;
  }
}

Eigen::MatrixXd as_matrix(const Subspace& s) {
  Eigen::MatrixXd m(s.n, s.dim());
  for (int c = 0; c < s.dim(); ++c) {
    for (int r = 0; r < s.n; ++r) m(r, c) = s.basis[c][r];
  }
  return m;
}

double max_residual(const Eigen::MatrixXd& a, const std::vector<std::vector<double>>& basis) {
  double out = 0.0;
  for (const auto& v : basis) {
    const Eigen::VectorXd r = a * Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    out = std::max(out, r.cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace

Subspace nullspace(std::span<const double> a, int rows, int cols, double rel_tol) {
  if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != a.size()) {
    throw std::invalid_argument("nullspace: matrix size mismatch");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = a[static_cast<std::size_t>(r) * cols + c];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  const double tau = rel_tol * (smax > 0.0 ? smax : 1.0);

  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tau) ++rank;
  }
  Subspace out;
  out.n = cols;
  out.tolerance = tau;
  for (int c = rank; c < cols; ++c) {
    std::vector<double> v(cols);
    for (int r = 0; r < cols; ++r) v[r] = svd.matrixV()(r, c);
    normalize_sign(v);
    out.basis.push_back(std::move(v));
  }
  out.residual = max_residual(m, out.basis);
  return out;
}

std::vector<double> principal_angles(const Subspace& a, const Subspace& b) {
  if (a.n != b.n) throw std::invalid_argument("principal_angles: ambient dimensions differ");
  if (a.dim() == 0 || b.dim() == 0) return {};
  // Work with the larger subspace as `big`; angles are symmetric.
  const Subspace& big = a.dim() >= b.dim() ? a : b;
  const Subspace& small = a.dim() >= b.dim() ? b : a;
  const Eigen::MatrixXd Q1 = as_matrix(big);
  const Eigen::MatrixXd Q2 = as_matrix(small);
  const Eigen::MatrixXd cross = Q1.transpose() * Q2;

  Eigen::JacobiSVD<Eigen::MatrixXd> cos_svd(cross);
  const Eigen::MatrixXd residual = Q2 - Q1 * cross;
  Eigen::JacobiSVD<Eigen::MatrixXd> sin_svd(residual);

  const int k = small.dim();
  std::vector<double> cosines(cos_svd.singularValues().data(), cos_svd.singularValues().data() + k);
  std::vector<double> sines(sin_svd.singularValues().data(),
                            sin_svd.singularValues().data() + sin_svd.singularValues().size());
  std::sort(cosines.begin(), cosines.end(), std::greater<>());
  std::sort(sines.begin(), sines.end());
  sines.resize(static_cast<std::size_t>(k), 0.0);

  std::vector<double> angles(k);
  for (int i = 0; i < k; ++i) {
    const double s = std::clamp(sines[i], 0.0, 1.0);
    const double c = std::clamp(cosines[i], 0.0, 1.0);
    angles[i] = s * s < 0.5 ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

Subspace nullity_space(const PointGeometry& geo, const Tolerances& tol) {
  const int n = geo.n;
  // Rows (h, i, k), column j.
  std::vector<double> a(static_cast<std::size_t>(n * n * n * n));
  std::size_t row = 0;
  for (int h = 0; h < n; ++h) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k, ++row) {
        for (int j = 0; j < n; ++j) a[row * n + j] = geo.curvature(h, i, j, k);
      }
    }
  }
  return nullspace(a, n * n * n, n, tol.rank_rel);
}

Subspace kernel_space(const PointGeometry& geo, const Tolerances& tol) {
  const int n = geo.n;
  // Rows (h, j, k), column i.
  std::vector<double> a(static_cast<std::size_t>(n * n * n * n));
  std::size_t row = 0;
  for (int h = 0; h < n; ++h) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k, ++row) {
        for (int i = 0; i < n; ++i) a[row * n + i] = geo.curvature(h, i, j, k);
      }
    }
  }
  return nullspace(a, n * n * n, n, tol.rank_rel);
}

CoincidenceVerdict coincide(const Subspace& nullity, const Subspace& kernel, const Tolerances& tol) {
  CoincidenceVerdict v;
  v.dim_nullity = nullity.dim();
  v.dim_kernel = kernel.dim();
  v.principal_angles = principal_angles(nullity, kernel);
  const double max_angle = v.principal_angles.empty() ? 0.0 : v.principal_angles.back();
  v.coincide = v.dim_nullity == v.dim_kernel && max_angle <= tol.angle;
  return v;
}

CoincidenceVerdict coincide(const PointGeometry& geo, const Tolerances& tol) {
  return coincide(nullity_space(geo, tol), kernel_space(geo, tol), tol);
}

std::string to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::Cyclic: return "cyclic";
    case ConditionKind::Integrability: return "integrability";
    case ConditionKind::Isotropy: return "isotropy";
  }
  return "unknown";
}

CyclicSumReport cyclic_sum_check(const PointGeometry& geo, const Tolerances& tol) {
  const int n = geo.n;
  const TensorBlock& R = geo.curvature;
  CyclicSumReport out;
  out.sum = TensorBlock("S", {Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower}, n);
  for (int h = 0; h < n; ++h) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) out.sum(h, i, j, k) = R(h, i, j, k) + R(h, j, k, i) + R(h, k, i, j);
      }
    }
  }
  out.report.kind = ConditionKind::Cyclic;
  out.report.residual = out.sum.max_abs();
  out.report.threshold = tol.cyclic_rel * R.max_abs();
  out.report.passes = out.report.residual <= out.report.threshold;
  return out;
}

ConditionReport integrability_check(const PointGeometry& geo, const Tolerances& tol) {
  ConditionReport out;
  out.kind = ConditionKind::Integrability;
  out.residual = geo.contracted_curvature().max_abs();
  out.threshold = tol.integrability_rel * std::max(1.0, geo.barthel.max_abs());
  out.passes = out.residual <= out.threshold;
  return out;
}

ConditionReport isotropy_check(const PointGeometry& geo, const Tolerances& tol) {
  const int n = geo.n;
  const TensorBlock rhat = geo.contracted_curvature();
  ConditionReport out;
  out.kind = ConditionKind::Isotropy;
  out.threshold = tol.isotropy;

  const ConditionReport flat = integrability_check(geo, tol);
  if (flat.passes) {
    out.lambda = 0.0;
    out.residual = flat.residual;
    out.passes = true;
    return out;
  }

  // F l_j = g_jm y^m
  std::vector<double> fl(n, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) fl[j] += geo.g(j, m) * geo.z.y[m];
  }
  TensorBlock model("M", {Variance::Upper, Variance::Lower, Variance::Lower}, n);
  double num = 0.0;
  double den = 0.0;
  for (int h = 0; h < n; ++h) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double m = (h == k ? fl[j] : 0.0) - (h == j ? fl[k] : 0.0);
        model(h, j, k) = m;
        num += m * rhat(h, j, k);
        den += m * m;
      }
    }
  }
  const double lambda = den > 0.0 ? num / den : 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < rhat.data().size(); ++i) {
    worst = std::max(worst, std::fabs(rhat.data()[i] - lambda * model.data()[i]));
  }
  out.lambda = lambda;
  out.residual = worst / rhat.max_abs();
  out.passes = out.residual <= out.threshold;
  return out;
}

ObstructionReport nullity_obstruction_check(const PointGeometry& geo, std::span<const double> X,
                                            const Tolerances& tol) {
  const int n = geo.n;
  if (static_cast<int>(X.size()) != n) throw std::invalid_argument("obstruction check: X must have length n");
  const TensorBlock& R = geo.curvature;

  double xmax = 0.0;
  for (double v : X) xmax = std::max(xmax, std::fabs(v));
  double membership = 0.0;
  for (int h = 0; h < n; ++h) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += X[j] * R(h, i, j, k);
        membership = std::max(membership, std::fabs(s));
      }
    }
  }
  const double limit = tol.membership * std::max(1.0, R.max_abs()) * std::max(1.0, xmax);
  if (membership > limit) {
    throw NotInNullity("X is not in the nullity space: max |X^j R^h_ijk| = " + std::to_string(membership));
  }

  ObstructionReport out;
  out.X.assign(X.begin(), X.end());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      PiVector lhs{std::vector<double>(n, 0.0)};
      for (int h = 0; h < n; ++h) {
        for (int i = 0; i < n; ++i) lhs.components[h] += X[i] * R(h, i, j, k);
      }
      const BracketPart bracket = FinslerSpace::bracket_vertical_part(geo, j + 1, k + 1);
      PiVector rhs = FinslerSpace::hv_torsion_apply(geo, X, bracket.vertical);
      for (int h = 0; h < n; ++h) {
        out.max_mismatch = std::max(out.max_mismatch, std::fabs(lhs.components[h] - rhs.components[h]));
      }
      out.lhs.push_back(std::move(lhs));
      out.rhs.push_back(std::move(rhs));
    }
  }
  return out;
}

}  // namespace finsler
