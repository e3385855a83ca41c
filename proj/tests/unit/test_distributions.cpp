#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "finsler/distributions.hpp"
#include "finsler/presets.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

FinslerSpace preset_space(const char* name) {
  const Preset p = find_preset(name);
  return FinslerSpace(parse(p.source, p.dim));
}

/// Rows (h, i, k), column j: the nullity system.
std::vector<double> nullity_system(const TensorBlock& r) {
  const int n = r.dim();
  std::vector<double> a;
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) a.push_back(r(h, i, j, k));
  return a;
}

/// Rows (h, j, k), column i: the kernel system.
std::vector<double> kernel_system(const TensorBlock& r) {
  const int n = r.dim();
  std::vector<double> a;
  for (int h = 0; h < n; ++h)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) a.push_back(r(h, i, j, k));
  return a;
}

Subspace from_basis(std::vector<std::vector<double>> basis, int n) {
  Subspace s;
  s.n = n;
  s.basis = std::move(basis);
  return s;
}

}  // namespace

TEST_CASE("nullspace of small matrices") {
  const std::vector<double> a{1, 2, 3, 2, 4, 6};
  const Subspace s = nullspace(a, 2, 3, 1e-8);
  REQUIRE(s.dim() == 2);
  for (const auto& v : s.basis) {
    CHECK(std::fabs(v[0] + 2 * v[1] + 3 * v[2]) <= 1e-14);
    double norm = 0.0;
    for (double c : v) norm += c * c;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
  double dot = 0.0;
  for (int i = 0; i < 3; ++i) dot += s.basis[0][i] * s.basis[1][i];
  CHECK(std::fabs(dot) <= 1e-12);

  const Subspace zero = nullspace(std::vector<double>(6, 0.0), 2, 3, 1e-8);
  CHECK(zero.dim() == 3);
  CHECK(zero.tolerance == 1e-8);

  const std::vector<double> id{1, 0, 0, 1};
  CHECK(nullspace(id, 2, 2, 1e-8).dim() == 0);
  CHECK_THROWS_AS(nullspace(id, 3, 2, 1e-8), std::invalid_argument);
}

TEST_CASE("principal angles") {
  const Subspace e1 = from_basis({{1, 0, 0}}, 3);
  const Subspace e12 = from_basis({{1, 0, 0}, {0, 1, 0}}, 3);
  const Subspace k = from_basis(oracle::span_of({1, -2, -2}), 3);
  CHECK(principal_angles(e1, e12) == std::vector<double>{0.0});
  REQUIRE(principal_angles(e1, k).size() == 1);
  CHECK(principal_angles(e1, k)[0] == doctest::Approx(std::acos(1.0 / 3.0)).epsilon(1e-14));
  const Subspace tiny = from_basis(oracle::span_of({1, 1e-12, 0}), 3);
  CHECK(principal_angles(e1, tiny)[0] == doctest::Approx(1e-12).epsilon(1e-3));
  CHECK(principal_angles(e1, from_basis({}, 3)).empty());
  CHECK(principal_angles(e12, from_basis({{0, 0, 1}}, 3))[0] == doctest::Approx(M_PI / 2));
}

TEST_CASE("coincidence verdicts") {
  const Subspace empty = from_basis({}, 3);
  const CoincidenceVerdict both_empty = coincide(empty, empty);
  CHECK(both_empty.coincide);
  CHECK(both_empty.principal_angles.empty());
  const Subspace e1 = from_basis({{1, 0, 0}}, 3);
  const Subspace e12 = from_basis({{1, 0, 0}, {0, 1, 0}}, 3);
  CHECK_FALSE(coincide(e1, e12).coincide);
  CHECK_FALSE(coincide(e1, empty).coincide);
  CHECK(coincide(e1, from_basis(oracle::span_of({1, 1e-8, 0}), 3)).coincide);
  CHECK_FALSE(coincide(e1, from_basis(oracle::span_of({1, 1e-5, 0}), 3)).coincide);
}

TEST_CASE("counterexample distributions at the reference point") {
  const FinslerSpace space(parse(oracle::kCounterexample, 3));
  const PointGeometry geo = space.compute(oracle::z1());
  const Subspace nullity = nullity_space(geo);
  const Subspace kernel = kernel_space(geo);
  REQUIRE(nullity.dim() == 1);
  REQUIRE(kernel.dim() == 1);
  CHECK(nullity.basis[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(nullity.basis[0][1]) <= 1e-12);
  CHECK(std::fabs(nullity.basis[0][2]) <= 1e-12);
  CHECK(oracle::max_angle(kernel.basis, oracle::span_of({1, -2, -2}), 3) <= 1e-8);

  const CoincidenceVerdict v = coincide(geo);
  CHECK(v.dim_nullity == 1);
  CHECK(v.dim_kernel == 1);
  CHECK_FALSE(v.coincide);
  REQUIRE(v.principal_angles.size() == 1);
  CHECK(std::fabs(v.principal_angles[0] - std::acos(1.0 / 3.0)) <= 1e-8);
  CHECK(std::fabs(v.principal_angles[0] - 1.230959) <= 1e-6);
}

TEST_CASE("nullity and kernel agree with an elimination oracle") {
  struct Case {
    const char* preset;
    bool counterexample;
  };
  for (const Case c : {Case{"paper-counterexample", true}, Case{"locally-minkowski", false},
                       Case{"riemann-constant-curvature", false}}) {
    const FinslerSpace space = preset_space(c.preset);
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 50; ++trial) {
      const TangentPoint z = c.counterexample ? oracle::counterexample_point(rng) : oracle::generic_point(rng);
      const PointGeometry geo = space.compute(z);
      const Subspace nullity = nullity_space(geo);
      const Subspace kernel = kernel_space(geo);
      const auto ref_nullity = oracle::elimination_nullspace(nullity_system(geo.curvature), 27, 3, 1e-8);
      const auto ref_kernel = oracle::elimination_nullspace(kernel_system(geo.curvature), 27, 3, 1e-8);
      CAPTURE(c.preset);
      REQUIRE(nullity.dim() == static_cast<int>(ref_nullity.size()));
      REQUIRE(kernel.dim() == static_cast<int>(ref_kernel.size()));
      CHECK(oracle::max_angle(nullity.basis, ref_nullity, 3) <= 1e-8);
      CHECK(oracle::max_angle(kernel.basis, ref_kernel, 3) <= 1e-8);

      // Membership residuals against the defining systems.
      for (const auto& x : nullity.basis) {
        for (int h = 0; h < 3; ++h)
          for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) {
              double s = 0.0;
              for (int j = 0; j < 3; ++j) s += x[j] * geo.curvature(h, i, j, k);
              CHECK(std::fabs(s) <= 10.0 * nullity.tolerance);
            }
      }
      for (const auto& zv : kernel.basis) {
        for (int h = 0; h < 3; ++h)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
              double s = 0.0;
              for (int i = 0; i < 3; ++i) s += zv[i] * geo.curvature(h, i, j, k);
              CHECK(std::fabs(s) <= 10.0 * kernel.tolerance);
            }
      }
      if (c.counterexample) {
        CHECK(oracle::max_angle(nullity.basis, oracle::span_of({1, 0, 0}), 3) <= 1e-8);
        CHECK(oracle::max_angle(kernel.basis, oracle::span_of(oracle::paper_kernel_direction(z)), 3) <= 1e-8);
        CHECK_FALSE(coincide(nullity, kernel).coincide);
      } else {
        CHECK(coincide(nullity, kernel).coincide);
      }
    }
  }
}

TEST_CASE("subspaces are invariant under scaling F") {
  const FinslerSpace base(parse(oracle::kCounterexample, 3));
  const FinslerSpace scaled(parse("3.5*sqrt(x3*y1*sqrt(y2^2+y3^2))", 3));
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 30; ++trial) {
    const TangentPoint z = oracle::counterexample_point(rng);
    const PointGeometry a = base.compute(z);
    const PointGeometry b = scaled.compute(z);
    const Subspace na = nullity_space(a), nb = nullity_space(b);
    const Subspace ka = kernel_space(a), kb = kernel_space(b);
    REQUIRE(na.dim() == nb.dim());
    REQUIRE(ka.dim() == kb.dim());
    CHECK(principal_angles(na, nb).back() <= 1e-8);
    CHECK(principal_angles(ka, kb).back() <= 1e-8);
  }
}

TEST_CASE("cyclic sum on the counterexample") {
  const FinslerSpace space(parse(oracle::kCounterexample, 3));
  const CyclicSumReport r = cyclic_sum_check(space.compute(oracle::z1()));
  CHECK(r.sum(1, 0, 1, 2) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::fabs(r.sum(1, 0, 1, 2) + 1.0) <= 1e-9);
  CHECK_FALSE(r.report.passes);
  CHECK(r.report.kind == ConditionKind::Cyclic);
  CHECK(r.report.residual == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(to_string(r.report.kind) == "cyclic");
}

TEST_CASE("integrability and isotropy on the counterexample") {
  const FinslerSpace space(parse(oracle::kCounterexample, 3));
  const PointGeometry geo = space.compute(oracle::z1());
  const ConditionReport integ = integrability_check(geo);
  CHECK(integ.residual == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_FALSE(integ.passes);
  const ConditionReport iso = isotropy_check(geo);
  CHECK_FALSE(iso.passes);
  CHECK(iso.residual > iso.threshold);
  CHECK(iso.lambda.has_value());
}

TEST_CASE("conditions on the trivial and Riemannian presets") {
  std::mt19937_64 rng(89);
  for (double c : {1.0, -0.7, 0.4}) {
    const Preset p = find_preset("riemann-constant-curvature", c);
    const FinslerSpace space(parse(p.source, p.dim));
    for (int trial = 0; trial < 20; ++trial) {
      const PointGeometry geo = space.compute(oracle::generic_point(rng));
      const CyclicSumReport cyc = cyclic_sum_check(geo);
      CHECK(cyc.report.passes);
      CHECK(cyc.report.residual <= 1e-9);
      const ConditionReport iso = isotropy_check(geo);
      CHECK(iso.passes);
      REQUIRE(iso.lambda.has_value());
      CHECK(*iso.lambda == doctest::Approx(c).epsilon(1e-8));
      CHECK_FALSE(integrability_check(geo).passes);
      // Sufficiency: the cyclic identity implies coincidence.
      const CoincidenceVerdict v = coincide(geo);
      CHECK(v.coincide);
      CHECK(v.dim_nullity == 0);
      CHECK(v.dim_kernel == 0);
    }
  }

  const FinslerSpace flat = preset_space("locally-minkowski");
  for (int trial = 0; trial < 20; ++trial) {
    const PointGeometry geo = flat.compute(oracle::generic_point(rng));
    CHECK(cyclic_sum_check(geo).report.passes);
    CHECK(integrability_check(geo).passes);
    const ConditionReport iso = isotropy_check(geo);
    CHECK(iso.passes);
    CHECK(iso.lambda.value_or(1.0) == 0.0);
    const CoincidenceVerdict v = coincide(geo);
    CHECK(v.coincide);
    CHECK(v.dim_nullity == 3);
    CHECK(v.dim_kernel == 3);
  }
}

TEST_CASE("nullity obstruction identity") {
  const FinslerSpace space(parse(oracle::kCounterexample, 3));
  const PointGeometry geo = space.compute(oracle::z1());
  const std::vector<double> x{1, 0, 0};
  const ObstructionReport rep = nullity_obstruction_check(geo, x);
  REQUIRE(rep.lhs.size() == 9);
  const PiVector& lhs = rep.lhs[1 * 3 + 2];
  const PiVector& rhs = rep.rhs[1 * 3 + 2];
  const double expect[] = {0.0, -1.0, 1.0};
  for (int h = 0; h < 3; ++h) {
    CHECK(std::fabs(lhs.components[h] - expect[h]) <= 1e-9);
    CHECK(std::fabs(rhs.components[h] - expect[h]) <= 1e-9);
  }
  CHECK(rep.max_mismatch <= 1e-8);

  const std::vector<double> bad{0, 1, 0};
  CHECK_THROWS_AS(nullity_obstruction_check(geo, bad), NotInNullity);

  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 50; ++trial) {
    const PointGeometry g = space.compute(oracle::counterexample_point(rng));
    for (const auto& basis : nullity_space(g).basis) {
      const ObstructionReport r = nullity_obstruction_check(g, basis);
      CHECK(r.max_mismatch <= 1e-8 * std::max(1.0, g.curvature.max_abs()));
    }
  }
}
