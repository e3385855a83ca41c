#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finsler/geometry.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// Thresholds used by the nullity/kernel machinery. Defaults are the values the
/// test suites pin.
struct Tolerances {
  double rank_rel = 1e-8;            // singular values <= rank_rel * sigma_max count as zero
  double angle = 1e-6;               // radians, for subspace coincidence
  double cyclic_rel = 1e-8;          // cyclic sum residual relative to max |R|
  double integrability_rel = 1e-10;  // max |Rhat| relative to max(1, max |N|)
  double isotropy = 1e-6;            // relative fit residual
  double membership = 1e-8;          // obstruction-check precondition
};

/// Orthonormal basis of a subspace of R^n. Each basis vector is sign-normalized
/// so that its largest-magnitude component is positive.
struct Subspace {
  int n = 0;
  std::vector<std::vector<double>> basis;
  double tolerance = 0.0;  // absolute singular-value threshold that decided the rank
  double residual = 0.0;   // max |A v| over basis vectors

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Null space of the rows x cols matrix `a` (row-major) by SVD, keeping right
/// singular vectors whose singular value is <= rel_tol * sigma_max (sigma_max
/// replaced by 1 when a is exactly zero).
Subspace nullspace(std::span<const double> a, int rows, int cols, double rel_tol);

/// Principal angles in radians, ascending. Empty when either subspace is {0}.
std::vector<double> principal_angles(const Subspace& a, const Subspace& b);

/// {X : X^j R^h_ijk = 0 for all h, i, k}.
Subspace nullity_space(const PointGeometry& geo, const Tolerances& tol = {});

/// {Z : Z^i R^h_ijk = 0 for all h, j, k}.
Subspace kernel_space(const PointGeometry& geo, const Tolerances& tol = {});

struct CoincidenceVerdict {
  int dim_nullity = 0;
  int dim_kernel = 0;
  bool coincide = false;
  std::vector<double> principal_angles;
};

CoincidenceVerdict coincide(const Subspace& nullity, const Subspace& kernel, const Tolerances& tol = {});
CoincidenceVerdict coincide(const PointGeometry& geo, const Tolerances& tol = {});

enum class ConditionKind { Cyclic, Integrability, Isotropy };

std::string to_string(ConditionKind kind);

struct ConditionReport {
  ConditionKind kind = ConditionKind::Cyclic;
  double residual = 0.0;
  double threshold = 0.0;
  bool passes = false;
  std::optional<double> lambda;
};

struct CyclicSumReport {
  ConditionReport report;
  TensorBlock sum;  // S^h_ijk = R^h_ijk + R^h_jki + R^h_kij
};

CyclicSumReport cyclic_sum_check(const PointGeometry& geo, const Tolerances& tol = {});

/// Rhat = 0, the integrability condition of the horizontal distribution.
ConditionReport integrability_check(const PointGeometry& geo, const Tolerances& tol = {});

/// Fits Rhat^h_jk against lambda * F (l_j delta^h_k - l_k delta^h_j) by least squares.
ConditionReport isotropy_check(const PointGeometry& geo, const Tolerances& tol = {});

struct ObstructionReport {
  std::vector<double> X;
  std::vector<PiVector> lhs;  // X^i R^h_ijk, indexed j * n + k
  std::vector<PiVector> rhs;  // T(X, [h_j, h_k]), indexed j * n + k
  double max_mismatch = 0.0;
};

/// Compares R(Y, Z)X with T(X, [Y, Z]) over all frame pairs for X in the
/// nullity space. Throws NotInNullity when X fails the nullity system.
ObstructionReport nullity_obstruction_check(const PointGeometry& geo, std::span<const double> X,
                                            const Tolerances& tol = {});

}  // namespace finsler
