#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "branchsolve/field.hpp"
#include "branchsolve/fourier.hpp"
#include "branchsolve/grid.hpp"

namespace testutil {

using branchsolve::Grid;
using branchsolve::GridSpec;
using branchsolve::SheetedField;

inline constexpr double kPi = std::numbers::pi;

inline Grid make_grid(int q, int k, int n_rhat, int n_theta_hat, int n_y, int n = 3) {
  GridSpec s;
  s.q = q;
  s.k = k;
  s.n = n;
  s.n_rhat = n_rhat;
  s.n_theta_hat = n_theta_hat;
  s.n_y.assign(n - 2, n_y);
  s.rho.assign(n - 2, 2.0 * kPi);
  return Grid(s);
}

inline double max_diff(const SheetedField& a, const SheetedField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

// Samples fn(l, r, theta, y) with the sheet angle theta + 2 pi l, evaluated directly
// from node coordinates.
inline SheetedField sample(const Grid& g, const std::function<double(int, double, double, double)>& fn) {
  SheetedField f(g, 1);
  for (int l = 0; l < g.q(); ++l)
    for (int i = 0; i < g.rings(); ++i)
      for (int j = 0; j < g.n_theta(); ++j)
        for (std::size_t y = 0; y < g.y_count(); ++y)
          f.at(0, l, i, j, y) = fn(l, g.r(i), g.theta(j), g.y(0, static_cast<int>(y)));
  return f;
}

// Re(r^{m/q} e^{i (m/q)(theta + 2 pi l)}), the closed-form branched harmonic.
inline SheetedField branched_power(const Grid& g, int m) {
  const double a = static_cast<double>(m) / g.q();
  return sample(g, [a](int l, double r, double t, double) {
    return std::pow(r, a) * std::cos(a * (t + 2.0 * kPi * l));
  });
}

inline SheetedField random_field(const Grid& g, int comps, std::uint64_t seed) {
  SheetedField f(g, comps);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (double& v : f.values()) v = d(rng);
  return f;
}

}  // namespace testutil
