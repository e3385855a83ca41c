#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"
#include "finsler/point.hpp"

namespace finsler {

/// One coordinate of TM: x^index or y^index, 1-based.
struct Coord {
  enum class Kind { X, Y };
  Kind kind;
  int index;
};

inline Coord dx(int i) { return {Coord::Kind::X, i}; }
inline Coord dy(int i) { return {Coord::Kind::Y, i}; }

/// Jet variable slot of a coordinate: x^i -> i-1, y^i -> n+i-1.
inline int slot(int n, Coord c) {
  if (c.index < 1 || c.index > n) {
    throw std::out_of_range("coordinate index " + std::to_string(c.index) + " outside 1.." + std::to_string(n));
  }
  return (c.kind == Coord::Kind::X ? 0 : n) + c.index - 1;
}

/// Multi-index over (x^1..x^n, y^1..y^n) counting each listed coordinate once.
inline MultiIndex multi_index(int n, std::initializer_list<Coord> coords) {
  if (2 * n > kMaxJetVars) throw std::out_of_range("dimension too large for jets");
  MultiIndex a{};
  for (const auto& c : coords) a[slot(n, c)] += 1;
  return a;
}

inline int total_order(const MultiIndex& a) {
  int s = 0;
  for (auto v : a) s += v;
  return s;
}

/// Seeds jets of order `order` for every coordinate of (x, y).
template <typename S>
void seed_jets(std::span<const S> x, std::span<const S> y, int order, std::vector<Jet<S>>& xs,
               std::vector<Jet<S>>& ys) {
  const int n = static_cast<int>(x.size());
  const int m = 2 * n;
  if (m > kMaxJetVars) throw std::out_of_range("dimension too large for jets");
  xs.clear();
  ys.clear();
  for (int i = 0; i < n; ++i) xs.push_back(Jet<S>::variable(m, order, i, x[i]));
  for (int i = 0; i < n; ++i) ys.push_back(Jet<S>::variable(m, order, n + i, y[i]));
}

/// Exact mixed partial d^alpha f at (x, y) by forward-mode truncated Taylor
/// arithmetic. `f` is any callable taking (span<const Jet<S>>, span<const Jet<S>>);
/// S may itself be a jet, which is how nested differentiation works.
template <typename S, typename F>
S partial(F&& f, const MultiIndex& alpha, std::span<const S> x, std::span<const S> y) {
  const int order = total_order(alpha);
  if (order > kMaxJetOrder) {
    throw OrderExceeded("derivative order " + std::to_string(order) + " exceeds maximum " +
                        std::to_string(kMaxJetOrder));
  }
  std::vector<Jet<S>> xs;
  std::vector<Jet<S>> ys;
  seed_jets(x, y, order, xs, ys);
  const Jet<S> r = f(std::span<const Jet<S>>(xs), std::span<const Jet<S>>(ys));
  return r.derivative(alpha);
}

template <typename F>
double partial(F&& f, const MultiIndex& alpha, const TangentPoint& z) {
  return partial<double>(std::forward<F>(f), alpha, std::span<const double>(z.x), std::span<const double>(z.y));
}

inline constexpr double kDefaultFdStep = 1e-3;

/// Central-difference estimate of d^alpha f with one Richardson step, error
/// O(h^4) per differentiated direction. Each direction uses the step
/// h * max(1, |coordinate|). `f` takes (span<const double>, span<const double>).
template <typename F>
double fd_partial(F&& f, const MultiIndex& alpha, const TangentPoint& z, double h = kDefaultFdStep) {
  const int order = total_order(alpha);
  if (order > 3) throw OrderExceeded("finite differences are limited to order 3");
  const int n = z.dim();

  struct Stencil {
    int var;
    int k;
  };
  std::vector<Stencil> dirs;
  for (int v = 0; v < 2 * n; ++v) {
    if (alpha[v] > 0) dirs.push_back({v, alpha[v]});
  }

  // Offsets (in steps) and weights of the O(h^2) central stencils for k = 1..3.
  static const std::vector<std::pair<double, double>> kStencils[4] = {
      {{0.0, 1.0}},
      {{-1.0, -0.5}, {1.0, 0.5}},
      {{-1.0, 1.0}, {0.0, -2.0}, {1.0, 1.0}},
      {{-2.0, -0.5}, {-1.0, 1.0}, {1.0, -1.0}, {2.0, 0.5}},
  };

  std::vector<double> base(2 * n);
  for (int i = 0; i < n; ++i) {
    base[i] = z.x[i];
    base[n + i] = z.y[i];
  }

  auto estimate = [&](double step) {
    std::vector<double> steps;
    double scale = 1.0;
    for (const auto& d : dirs) {
      // Round the step so that base + hv is exactly representable.
      const double shifted = base[d.var] + step * std::max(1.0, std::fabs(base[d.var]));
      const double hv = shifted - base[d.var];
      steps.push_back(hv);
      scale *= std::pow(hv, d.k);
    }
    std::vector<std::size_t> counter(dirs.size(), 0);
    double sum = 0.0;
    std::vector<double> p(2 * n);
    while (true) {
      p = base;
      double w = 1.0;
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        const auto& [offset, weight] = kStencils[dirs[i].k][counter[i]];
        p[dirs[i].var] += offset * steps[i];
        w *= weight;
      }
      const double fv = f(std::span<const double>(p.data(), n), std::span<const double>(p.data() + n, n));
      sum += w * fv;
      std::size_t i = 0;
      for (; i < dirs.size(); ++i) {
        if (++counter[i] < kStencils[dirs[i].k].size()) break;
        counter[i] = 0;
      }
      if (i == dirs.size()) break;
    }
    return sum / scale;
  };

  if (dirs.empty()) return estimate(h);
  const double coarse = estimate(h);
  const double fine = estimate(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace finsler
