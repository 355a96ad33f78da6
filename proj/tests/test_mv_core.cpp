#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "branchsolve/error.hpp"
#include "branchsolve/holder.hpp"
#include "branchsolve/mv_core.hpp"
#include "test_util.hpp"

using namespace branchsolve;
using namespace testutil;

namespace {

double brute_metric(const std::vector<double>& a, const std::vector<double>& b, int q, int m) {
  std::vector<int> perm(q);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double s = 0.0;
    for (int l = 0; l < q; ++l)
      for (int c = 0; c < m; ++c) {
        const double d = a[l * m + c] - b[perm[l] * m + c];
        s += d * d;
      }
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best);
}

}  // namespace

TEST_CASE("metric_G small cases") {
  CHECK(metric_G(QTuple(2, 1, {0, 0}), QTuple(2, 1, {1, -1})) == doctest::Approx(std::sqrt(2.0)));
  CHECK(metric_G(QTuple(3, 1, {1, 2, 3}), QTuple(3, 1, {3, 1, 2})) == 0.0);
  const QTuple a(3, 2, {0.3, -1, 2, 5, 7, 1});
  CHECK(metric_G(a, a) == 0.0);
  CHECK_THROWS_AS(metric_G(QTuple(2, 1, {0, 0}), QTuple(3, 1, {0, 0, 0})), DimensionError);
  CHECK_THROWS_AS(QTuple(2, 2, {0, 0, 1}), DimensionError);
}

TEST_CASE("metric_G matches brute force and is a metric") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d;
  for (int q : {2, 3, 4, 7, 8}) {
    const int m = 2;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> a(q * m), b(q * m), c(q * m);
      for (auto* v : {&a, &b, &c})
        for (double& x : *v) x = d(rng);
      const double ab = metric_G(QTuple(q, m, a), QTuple(q, m, b));
      CHECK(ab == doctest::Approx(brute_metric(a, b, q, m)).epsilon(1e-12));
      const double bc = metric_G(QTuple(q, m, b), QTuple(q, m, c));
      const double ac = metric_G(QTuple(q, m, a), QTuple(q, m, c));
      CHECK(ac <= ab + bc + 1e-12);
      CHECK(ab == doctest::Approx(metric_G(QTuple(q, m, b), QTuple(q, m, a))));
      // permuting storage changes nothing
      std::vector<double> shuffled(a);
      std::vector<int> perm(q);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int l = 0; l < q; ++l)
        for (int k = 0; k < m; ++k) shuffled[l * m + k] = a[perm[l] * m + k];
      CHECK(metric_G(QTuple(q, m, shuffled), QTuple(q, m, a)) < 1e-12);
    }
  }
}

TEST_CASE("average-free decomposition") {
  const Grid g = make_grid(3, 4, 9, 24, 4);
  SheetedField f(g, 1);
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < g.rings(); ++i)
      for (int j = 0; j < g.n_theta(); ++j)
        for (std::size_t y = 0; y < g.y_count(); ++y) f.at(0, l, i, j, y) = l + 1.0;
  auto split = average_free_decompose(f);
  for (int l = 0; l < 3; ++l) {
    CHECK(split.average.at(0, l, 2, 3, 1) == doctest::Approx(2.0));
    CHECK(split.free.at(0, l, 2, 3, 1) == doctest::Approx(l - 1.0));
  }

  const SheetedField r = random_field(g, 2, 17);
  split = average_free_decompose(r);
  double worst = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < g.rings(); ++i)
      for (int j = 0; j < g.n_theta(); ++j)
        for (std::size_t y = 0; y < g.y_count(); ++y) {
          double s = 0.0;
          for (int l = 0; l < 3; ++l) s += split.free.at(c, l, i, j, y);
          worst = std::max(worst, std::abs(s));
        }
  CHECK(worst <= 1e-14 * r.max_abs());
  CHECK(max_diff(split.average + split.free, r) < 1e-14);

  // identical sheets
  SheetedField same(g, 1);
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < g.rings(); ++i)
      for (int j = 0; j < g.n_theta(); ++j)
        for (std::size_t y = 0; y < g.y_count(); ++y) same.at(0, l, i, j, y) = r.at(0, 0, i, j, y);
  CHECK(average_free_decompose(same).free.max_abs() == 0.0);
}

TEST_CASE("k-fold symmetry defect") {
  const Grid g = make_grid(2, 3, 33, 48, 4);
  SheetedField c(g, 1);
  for (double& v : c.values()) v = 2.5;
  CHECK(kfold_symmetry_defect(c) == 0.0);

  CHECK(kfold_symmetry_defect(branched_power(g, 3)) < 1e-12);
  // m = 9 is also a multiple of k; m = 1 is not
  CHECK(kfold_symmetry_defect(branched_power(g, 9)) < 1e-12);
  CHECK(kfold_symmetry_defect(branched_power(g, 1)) > 0.1);

  SheetedField p = branched_power(g, 3);
  p.at(0, 1, 5, 7, 2) += 0.125;
  CHECK(kfold_symmetry_defect(p) == doctest::Approx(0.125).epsilon(1e-9));

  const Grid g34 = make_grid(3, 4, 17, 48, 2);
  CHECK(kfold_symmetry_defect(branched_power(g34, 4)) < 1e-12);
  CHECK(kfold_symmetry_defect(branched_power(g34, 8)) < 1e-12);
  CHECK(kfold_symmetry_defect(branched_power(g34, 2)) > 0.1);
}

TEST_CASE("rotate_node is a permutation of order k") {
  for (auto [q, k] : {std::pair{2, 3}, std::pair{3, 4}, std::pair{2, 5}, std::pair{3, 5}}) {
    const Grid g = make_grid(q, k, 9, q * k * 4, 1);
    std::vector<int> hits(q * g.n_theta(), 0);
    for (int l = 0; l < q; ++l)
      for (int j = 0; j < g.n_theta(); ++j) {
        SheetNode n{l, j};
        const SheetNode img = rotate_node(g, l, j);
        ++hits[img.sheet * g.n_theta() + img.j];
        for (int a = 0; a < k; ++a) n = rotate_node(g, n.sheet, n.j);
        CHECK(n.sheet == l);
        CHECK(n.j == j);
      }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
}

TEST_CASE("symmetrize projects onto symmetric fields") {
  const Grid g = make_grid(2, 3, 17, 48, 4);
  const SheetedField r = random_field(g, 1, 3);
  const SheetedField s = symmetrize(r);
  CHECK(kfold_symmetry_defect(s) < 1e-14);
  CHECK(max_diff(symmetrize(s), s) < 1e-14);
}

TEST_CASE("flux equivariance of a rotated gradient field") {
  // flux = gradient of Re(z^{3/2}) on each sheet, with a y-component 0.3 u
  const Grid g = make_grid(2, 3, 17, 48, 4);
  SheetedField flux(g, 3);
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < g.rings(); ++i)
      for (int j = 0; j < g.n_theta(); ++j) {
        const cplx w = std::polar(std::sqrt(g.r(i)), 0.5 * (g.theta(j) + 2.0 * kPi * l));
        const cplx d = 1.5 * w;  // u_x1 - i u_x2
        for (std::size_t y = 0; y < g.y_count(); ++y) {
          flux.at(0, l, i, j, y) = d.real();
          flux.at(1, l, i, j, y) = -d.imag();
          flux.at(2, l, i, j, y) = 0.3 * (w * w * w).real();
        }
      }
  CHECK(flux_equivariance_defect(flux) < 1e-12);
  flux.at(2, 0, 3, 3, 0) += 1e-3;
  CHECK(flux_equivariance_defect(flux) == doctest::Approx(1e-3).epsilon(1e-6));
  CHECK_THROWS_AS(flux_equivariance_defect(flux, 2), DimensionError);
}

TEST_CASE("difference quotient") {
  const Grid g = make_grid(2, 3, 9, 12, 32);
  const double rho = g.rho(0);
  const double step = rho / g.n_y(0);
  const std::vector<double> eta{1.0};

  SheetedField flat = sample(g, [](int l, double r, double t, double) { return r * std::cos(t) + l; });
  CHECK(difference_quotient(flat, step, eta).max_abs() == 0.0);
  CHECK(difference_quotient(flat, 0.37, eta).max_abs() < 1e-14);

  const SheetedField s = sample(g, [rho](int, double, double, double y) { return std::sin(2 * kPi * y / rho); });
  const SheetedField exact_shift = sample(g, [rho, step](int, double, double, double y) {
    return (std::sin(2 * kPi * (y + step) / rho) - std::sin(2 * kPi * y / rho)) / step;
  });
  CHECK(max_diff(difference_quotient(s, step, eta), exact_shift) < 1e-14);

  const SheetedField deriv =
      sample(g, [rho](int, double, double, double y) { return 2 * kPi / rho * std::cos(2 * kPi * y / rho); });
  double prev = 0.0;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    const double e = max_diff(difference_quotient(s, h, eta), deriv);
    if (prev > 0.0) CHECK(prev / e == doctest::Approx(2.0).epsilon(0.05));
    prev = e;
  }
  CHECK_THROWS_AS(difference_quotient(s, 0.0, eta), InvalidProblem);
}

TEST_CASE("holder seminorm") {
  SUBCASE("affine function has vanishing gradient seminorm") {
    const Grid g = make_grid(2, 3, 17, 48, 4);
    const SheetedField f = sample(g, [](int, double r, double t, double y) {
      return 0.7 * r * std::cos(t) - 0.2 * r * std::sin(t) + 0.1 * std::cos(y);
    });
    const auto rep0 = holder_seminorm(f, 0.5, 0);
    CHECK(rep0.holder_seminorm_estimate > 0.0);
    const SheetedField a = sample(g, [](int, double r, double t, double) {
      return 0.7 * r * std::cos(t) - 0.2 * r * std::sin(t) + 3.0;
    });
    CHECK(holder_seminorm(a, 0.5, 1).holder_seminorm_estimate < 1e-10);
    CHECK(holder_seminorm(a, 0.5, 0).sup_abs == doctest::Approx(a.max_abs()));
  }

  SUBCASE("gradient of Re(z^{3/2}) against a dense-pair oracle on a refined grid") {
    const Grid coarse = make_grid(2, 3, 65, 48, 1);
    const double est = holder_seminorm(branched_power(coarse, 3), 0.5, 1).holder_seminorm_estimate;

    // dense oracle: all node pairs of the 4x refined grid per sheet and half plane,
    // gradient from the closed form 1.5 z^{1/2} = u_x1 - i u_x2
    const Grid fine = make_grid(2, 3, 257, 192, 1);
    double total = 0.0;
    for (int l = 0; l < 2; ++l)
      for (int half = 0; half < 2; ++half) {
        std::vector<cplx> pos, grad;
        for (int i = 0; i < fine.rings(); ++i)
          for (int j = 0; j < fine.n_theta(); ++j) {
            const double t = fine.theta(j);
            if ((std::sin(t) > 0) != (half == 0)) continue;
            pos.push_back(std::polar(fine.r(i), t));
            grad.push_back(std::conj(1.5 * std::polar(std::sqrt(fine.r(i)), 0.5 * (t + 2 * kPi * l))));
          }
        double best = 0.0;
        for (std::size_t a = 0; a < pos.size(); ++a)
          for (std::size_t b = a + 1; b < pos.size(); ++b)
            best = std::max(best, std::abs(grad[a] - grad[b]) / std::sqrt(std::abs(pos[a] - pos[b])));
        total += best;
      }
    CHECK(est > 0.0);
    CHECK(std::abs(est - total) <= 0.1 * total);
  }
}
