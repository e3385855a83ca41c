#pragma once

#include <span>
#include <vector>

#include "finsler/autodiff.hpp"
#include "finsler/expr.hpp"
#include "finsler/point.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// Relative factor of the regularity test |det g| > factor * (max |g_ij|)^n.
inline constexpr double kDefaultDetTolerance = 1e-10;

/// g and C at a point; everything that only needs y-derivatives of F^2.
struct MetricData {
  TangentPoint z;
  double F = 0.0;
  TensorBlock g;       // g_ij
  TensorBlock cartan;  // C_ijk
};

/// Vertical part of the Lie bracket [h_j, h_k] of two adapted-frame fields.
struct BracketPart {
  std::vector<double> vertical;  // components along d/dy^m
  double horizontal_residual = 0.0;
  bool horizontal = false;
};

/// Cartan-connection data at one point of TM, in the adapted frame
/// {h_i = d/dx^i - N^m_i d/dy^m, d/dy^i}.
struct PointGeometry {
  TangentPoint z;
  int n = 0;
  double F = 0.0;
  double det_g = 0.0;
  TensorBlock g;             // g_ij
  TensorBlock g_inv;         // g^ij
  TensorBlock cartan;        // C_ijk
  TensorBlock cartan_mixed;  // C^h_ij = g^hl C_lij
  TensorBlock spray;         // G^i
  TensorBlock barthel;       // N^i_j
  TensorBlock delta_g;       // delta_k g_ij stored as (k, i, j)
  TensorBlock gamma;         // Gamma^i_jk
  TensorBlock curvature;     // R^h_ijk
  TensorBlock rhat_barthel;  // delta_k N^h_j - delta_j N^h_k
  TensorBlock bracket;       // vertical part of [h_j, h_k], stored as (m, j, k)
  TensorBlock bracket_horizontal;  // horizontal part of [h_j, h_k], (m, j, k); zero in theory

  /// R^h_jk(hat) = y^i R^h_ijk.
  TensorBlock contracted_curvature() const;
};

/// A Finsler function together with the operations of the Cartan connection.
/// Immutable; every method is a pure function of the point.
class FinslerSpace {
 public:
  explicit FinslerSpace(Expression f, double det_tolerance = kDefaultDetTolerance);

  const Expression& function() const { return f_; }
  int dim() const { return f_.dim(); }
  double det_tolerance() const { return det_tol_; }

  /// F(z); throws DomainError outside the domain, InvalidPoint if F <= 0.
  double finsler_function(const TangentPoint& z) const;

  MetricData metric(const TangentPoint& z) const;
  PointGeometry compute(const TangentPoint& z) const;

  TensorBlock fundamental_tensor(const TangentPoint& z) const { return metric(z).g; }
  TensorBlock inverse_metric(const TangentPoint& z) const;
  TensorBlock cartan_tensor(const TangentPoint& z) const { return metric(z).cartan; }
  TensorBlock spray(const TangentPoint& z) const { return compute(z).spray; }
  TensorBlock barthel_connection(const TangentPoint& z) const { return compute(z).barthel; }
  TensorBlock cartan_horizontal_coeffs(const TangentPoint& z) const { return compute(z).gamma; }
  TensorBlock h_curvature(const TangentPoint& z) const { return compute(z).curvature; }
  TensorBlock contracted_curvature(const TangentPoint& z) const { return compute(z).contracted_curvature(); }

  /// Vertical components of [h_j, h_k] (1-based j, k) and whether the bracket is horizontal.
  BracketPart bracket_vertical_part(int j, int k, const TangentPoint& z) const;
  static BracketPart bracket_vertical_part(const PointGeometry& geo, int j, int k);

  /// delta_i f = df/dx^i - N^m_i df/dy^m for a scalar field f taking
  /// (span<const Jet<double>>, span<const Jet<double>>); i is 1-based.
  template <typename Field>
  double horizontal_derivative(Field&& f, int i, const TangentPoint& z) const {
    return horizontal_derivative(std::forward<Field>(f), i, z, compute(z));
  }

  template <typename Field>
  static double horizontal_derivative(Field&& f, int i, const TangentPoint& z, const PointGeometry& geo) {
    const int n = z.dim();
    const auto d = [&](Coord c) { return partial(f, multi_index(n, {c}), z); };
    double out = d(dx(i));
    for (int m = 1; m <= n; ++m) out -= geo.barthel(m - 1, i - 1) * d(dy(m));
    return out;
  }

  /// (h)hv-torsion T(u, w)^h = C^h_im u^i w^m for horizontal u and vertical w.
  static PiVector hv_torsion_apply(const PointGeometry& geo, std::span<const double> u,
                                   std::span<const double> w);

  /// l(v) = F^-1 g_ij v^i y^j.
  static double ell(const PointGeometry& geo, std::span<const double> v);

 private:
  Expression f_;
  double det_tol_;
};

}  // namespace finsler
