#include "finsler/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "finsler/jet.hpp"

namespace finsler {

namespace {

using Lower = std::vector<Variance>;

TensorBlock block(const char* name, std::initializer_list<Variance> v, int n) {
  return TensorBlock(name, std::vector<Variance>(v), n);
}

constexpr Variance U = Variance::Upper;
constexpr Variance L = Variance::Lower;

/// Flat n x n matrix of values with row-major (i, j) layout.
template <typename T>
using Matrix = std::vector<T>;

/// Determinant by Gaussian elimination with partial pivoting.
double determinant(std::vector<double> a, int n) {
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::fabs(a[r * n + c]) > std::fabs(a[pivot * n + c])) pivot = r;
    }
    if (a[pivot * n + c] == 0.0) return 0.0;
    if (pivot != c) {
      for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[pivot * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

/// Gauss-Jordan inverse with partial pivoting on plain values; works for jets.
template <typename T>
Matrix<T> invert(Matrix<T> a, int n) {
  Matrix<T> inv(static_cast<std::size_t>(n * n), T(0.0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = T(1.0);
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::fabs(plain_value(a[r * n + c])) > std::fabs(plain_value(a[pivot * n + c]))) pivot = r;
    }
    if (pivot != c) {
      for (int k = 0; k < n; ++k) {
        std::swap(a[c * n + k], a[pivot * n + k]);
        std::swap(inv[c * n + k], inv[pivot * n + k]);
      }
    }
    const T p = a[c * n + c];
    for (int k = 0; k < n; ++k) {
      a[c * n + k] = a[c * n + k] / p;
      inv[c * n + k] = inv[c * n + k] / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const T f = a[r * n + c];
      for (int k = 0; k < n; ++k) {
        a[r * n + k] = a[r * n + k] - f * a[c * n + k];
        inv[r * n + k] = inv[r * n + k] - f * inv[c * n + k];
      }
    }
  }
  return inv;
}

/// Jets of F^2 and g at a point, shared by the metric and full pipelines.
struct MetricJets {
  int n = 0;
  double F = 0.0;
  std::vector<Jet1> xs, ys;  // coordinate jets of order 4
  Jet1 phi;                  // F^2, order 4
  Matrix<Jet1> g;            // order 2
};

MetricJets metric_jets(const Expression& f, const TangentPoint& z) {
  MetricJets mj;
  const int n = z.dim();
  if (n != f.dim()) throw std::invalid_argument("point dimension does not match the function");
  mj.n = n;
  mj.F = evaluate(f, z.x, z.y);
  if (!(mj.F > 0.0)) throw InvalidPoint("F must be positive at the point (F = " + std::to_string(mj.F) + ")");
  seed_jets(std::span<const double>(z.x), std::span<const double>(z.y), kMaxJetOrder, mj.xs, mj.ys);
  const Jet1 F = evaluate(f, std::span<const Jet1>(mj.xs), std::span<const Jet1>(mj.ys));
  mj.phi = F * F;
  mj.g.resize(static_cast<std::size_t>(n * n));
  std::vector<Jet1> dphi;
  for (int i = 0; i < n; ++i) dphi.push_back(mj.phi.differentiate(n + i));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) mj.g[i * n + j] = 0.5 * dphi[i].differentiate(n + j);
  }
  return mj;
}

void fill_metric(const MetricJets& mj, TensorBlock& g, TensorBlock& cartan) {
  const int n = mj.n;
  g = block("g", {L, L}, n);
  cartan = block("C", {L, L, L}, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Jet1& gij = mj.g[i * n + j];
      g(i, j) = gij.value();
      for (int k = 0; k < n; ++k) cartan(i, j, k) = 0.5 * gij.differentiate(n + k).value();
    }
  }
}

double det_threshold(const TensorBlock& g, double factor) {
  return factor * std::pow(g.max_abs(), g.dim());
}

}  // namespace

TensorBlock PointGeometry::contracted_curvature() const {
  TensorBlock out = block("Rhat", {U, L, L}, n);
  for (int h = 0; h < n; ++h) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += z.y[i] * curvature(h, i, j, k);
        out(h, j, k) = s;
      }
    }
  }
  return out;
}

FinslerSpace::FinslerSpace(Expression f, double det_tolerance) : f_(std::move(f)), det_tol_(det_tolerance) {
  if (2 * f_.dim() > kMaxJetVars) {
    throw std::invalid_argument("dimension " + std::to_string(f_.dim()) + " exceeds the supported maximum of " +
                                std::to_string(kMaxJetVars / 2));
  }
}

double FinslerSpace::finsler_function(const TangentPoint& z) const {
  const double F = evaluate(f_, z.x, z.y);
  if (!(F > 0.0)) throw InvalidPoint("F must be positive at the point (F = " + std::to_string(F) + ")");
  return F;
}

MetricData FinslerSpace::metric(const TangentPoint& z) const {
  const MetricJets mj = metric_jets(f_, z);
  MetricData out;
  out.z = z;
  out.F = mj.F;
  fill_metric(mj, out.g, out.cartan);
  return out;
}

TensorBlock FinslerSpace::inverse_metric(const TangentPoint& z) const {
  return compute(z).g_inv;
}

PointGeometry FinslerSpace::compute(const TangentPoint& z) const {
  const MetricJets mj = metric_jets(f_, z);
  const int n = mj.n;
  const auto X = [](int i) { return i; };
  const auto Y = [n](int i) { return n + i; };

  PointGeometry geo;
  geo.z = z;
  geo.n = n;
  geo.F = mj.F;
  fill_metric(mj, geo.g, geo.cartan);

  {
    std::vector<double> gv(geo.g.data().begin(), geo.g.data().end());
    geo.det_g = determinant(gv, n);
    const double threshold = det_threshold(geo.g, det_tol_);
    if (!(std::fabs(geo.det_g) > threshold)) throw DegenerateMetric(geo.det_g, threshold);
  }

  const Matrix<Jet1> ginv = invert(mj.g, n);  // order 2
  geo.g_inv = block("g_inv", {U, U}, n);
  for (int i = 0; i < n * n; ++i) geo.g_inv.data()[i] = ginv[i].value();

  geo.cartan_mixed = block("C_mixed", {U, L, L}, n);
  for (int h = 0; h < n; ++h) {
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += geo.g_inv(h, l) * geo.cartan(l, i, m);
        geo.cartan_mixed(h, i, m) = s;
      }
    }
  }

  // Spray G^i = 1/4 g^il (y^m d^2 F^2/dy^l dx^m - dF^2/dx^l), as order-2 jets.
  std::vector<Jet1> spray(n);
  for (int i = 0; i < n; ++i) spray[i] = Jet1(0.0);
  for (int l = 0; l < n; ++l) {
    const Jet1 dyl = mj.phi.differentiate(Y(l));
    Jet1 bracket = -mj.phi.differentiate(X(l)).truncate(2);
    for (int m = 0; m < n; ++m) bracket += mj.ys[m] * dyl.differentiate(X(m));
    for (int i = 0; i < n; ++i) spray[i] += 0.25 * ginv[i * n + l] * bracket;
  }
  geo.spray = block("G", {U}, n);
  for (int i = 0; i < n; ++i) geo.spray(i) = spray[i].value();

  // Barthel connection N^i_j = dG^i/dy^j, order 1.
  Matrix<Jet1> N(static_cast<std::size_t>(n * n));
  geo.barthel = block("N", {U, L}, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      N[i * n + j] = spray[i].differentiate(Y(j));
      geo.barthel(i, j) = N[i * n + j].value();
    }
  }

  // delta_j f = df/dx^j - N^m_j df/dy^m, one order lower than f.
  const auto delta = [&](const Jet1& f, int j) {
    const int out_order = f.order() - 1;
    Jet1 out = f.differentiate(X(j));
    for (int m = 0; m < n; ++m) out -= N[m * n + j].truncate(out_order) * f.differentiate(Y(m));
    return out;
  };

  Matrix<Jet1> dg(static_cast<std::size_t>(n * n * n));  // (k, i, j) -> delta_k g_ij, order 1
  geo.delta_g = block("delta_g", {L, L, L}, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        dg[(k * n + i) * n + j] = delta(mj.g[i * n + j], k);
        geo.delta_g(k, i, j) = dg[(k * n + i) * n + j].value();
      }
    }
  }
  const auto DG = [&](int k, int i, int j) -> const Jet1& { return dg[(k * n + i) * n + j]; };

  // Gamma^i_jk = 1/2 g^il (delta_j g_lk + delta_k g_jl - delta_l g_jk), order 1.
  Matrix<Jet1> gamma(static_cast<std::size_t>(n * n * n));
  geo.gamma = block("Gamma", {U, L, L}, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Jet1 s(0.0);
        for (int l = 0; l < n; ++l) {
          s += ginv[i * n + l].truncate(1) * (DG(j, l, k) + DG(k, j, l) - DG(l, j, k));
        }
        gamma[(i * n + j) * n + k] = 0.5 * s;
        geo.gamma(i, j, k) = gamma[(i * n + j) * n + k].value();
      }
    }
  }
  const auto GAMMA = [&](int i, int j, int k) -> const Jet1& { return gamma[(i * n + j) * n + k]; };

  geo.rhat_barthel = block("Rhat_barthel", {U, L, L}, n);
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        geo.rhat_barthel(m, j, k) = delta(N[m * n + j], k).value() - delta(N[m * n + k], j).value();
      }
    }
  }

  // R^h_ijk = delta_k Gamma^h_ij - delta_j Gamma^h_ik + Gamma^m_ij Gamma^h_mk
  //         - Gamma^m_ik Gamma^h_mj + C^h_im Rhat^m_jk
  std::vector<double> dgamma(static_cast<std::size_t>(n * n * n * n));  // (h, i, j, l) -> delta_l Gamma^h_ij
  for (int h = 0; h < n; ++h) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) dgamma[((h * n + i) * n + j) * n + l] = delta(GAMMA(h, i, j), l).value();
      }
    }
  }
  const auto DGAMMA = [&](int h, int i, int j, int l) { return dgamma[((h * n + i) * n + j) * n + l]; };

  geo.curvature = block("R", {U, L, L, L}, n);
  for (int h = 0; h < n; ++h) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double r = DGAMMA(h, i, j, k) - DGAMMA(h, i, k, j);
          for (int m = 0; m < n; ++m) {
            r += GAMMA(m, i, j).value() * GAMMA(h, m, k).value() - GAMMA(m, i, k).value() * GAMMA(h, m, j).value();
            r += geo.cartan_mixed(h, i, m) * geo.rhat_barthel(m, j, k);
          }
          geo.curvature(h, i, j, k) = r;
        }
      }
    }
  }

  // Lie bracket of the frame fields h_j = e_j - N^m_j d/dy^m as vector fields
  // on TM: [V, W]^a = V^b d_b W^a - W^b d_b V^a.
  const auto field_component = [&](int j, int a) -> Jet1 {
    if (a < n) return Jet1(a == j ? 1.0 : 0.0);
    return -N[(a - n) * n + j];
  };
  const auto field_value = [&](int j, int b) {
    return b < n ? (b == j ? 1.0 : 0.0) : -geo.barthel(b - n, j);
  };
  geo.bracket = block("bracket_vertical", {U, L, L}, n);
  geo.bracket_horizontal = block("bracket_horizontal", {U, L, L}, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (int a = 0; a < 2 * n; ++a) {
        const Jet1 Wa = field_component(k, a);
        const Jet1 Va = field_component(j, a);
        double s = 0.0;
        for (int b = 0; b < 2 * n; ++b) {
          s += field_value(j, b) * Wa.differentiate(b).value() - field_value(k, b) * Va.differentiate(b).value();
        }
        if (a < n) {
          geo.bracket_horizontal(a, j, k) = s;
        } else {
          geo.bracket(a - n, j, k) = s;
        }
      }
    }
  }

  return geo;
}

BracketPart FinslerSpace::bracket_vertical_part(const PointGeometry& geo, int j, int k) {
  const int n = geo.n;
  if (j < 1 || j > n || k < 1 || k > n) throw std::out_of_range("bracket index out of range");
  BracketPart out;
  double vmax = 0.0;
  for (int m = 0; m < n; ++m) {
    out.vertical.push_back(geo.bracket(m, j - 1, k - 1));
    vmax = std::max(vmax, std::fabs(out.vertical.back()));
    out.horizontal_residual = std::max(out.horizontal_residual, std::fabs(geo.bracket_horizontal(m, j - 1, k - 1)));
  }
  const double tol = 1e-10 * std::max(1.0, geo.barthel.max_abs());
  out.horizontal = vmax <= tol;
  return out;
}

BracketPart FinslerSpace::bracket_vertical_part(int j, int k, const TangentPoint& z) const {
  return bracket_vertical_part(compute(z), j, k);
}

PiVector FinslerSpace::hv_torsion_apply(const PointGeometry& geo, std::span<const double> u,
                                        std::span<const double> w) {
  const int n = geo.n;
  if (static_cast<int>(u.size()) != n || static_cast<int>(w.size()) != n) {
    throw std::invalid_argument("hv_torsion_apply: u and w must have length n");
  }
  PiVector out{std::vector<double>(n, 0.0)};
  for (int h = 0; h < n; ++h) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < n; ++m) s += geo.cartan_mixed(h, i, m) * u[i] * w[m];
    }
    out.components[h] = s;
  }
  return out;
}

double FinslerSpace::ell(const PointGeometry& geo, std::span<const double> v) {
  const int n = geo.n;
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("ell: v must have length n");
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s += geo.g(i, j) * v[i] * geo.z.y[j];
  }
  return s / geo.F;
}

}  // namespace finsler
