#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace branchsolve {

/// Raw grid parameters as they appear in config and field-file headers.
struct GridSpec {
  int q = 2;
  int k = 3;
  int n = 3;
  int n_rhat = 65;           // radial nodes in the unfolded grid, axis included
  int n_theta_hat = 48;      // unfolded angular nodes, a multiple of k*q
  std::vector<int> n_y{16};  // one entry per y-dimension (n - 2 of them)
  std::vector<double> rho{2.0 * std::numbers::pi};  // y-periods
};

/// Validated discretisation of the cylinder B_1(0) x torus shared by the sheeted
/// and unfolded representations.
///
/// Radial nodes are uniform in r_hat = r^{1/q}: r_hat_i = (i+1) h for ring
/// i = 0..rings()-1, h = 1/(n_rhat-1); ring rings()-1 lies on r = 1. The axis
/// r_hat = 0 is not a ring. Angular nodes are half-offset so no node sits on the
/// cut: theta_j = 2 pi (j + 1/2) / n_theta() on each sheet and
/// theta_hat_b = 2 pi (b + 1/2) / n_theta_hat() in the unfolded disk.
class Grid {
 public:
  explicit Grid(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  int q() const { return spec_.q; }
  int k() const { return spec_.k; }
  int n() const { return spec_.n; }

  int n_rhat() const { return spec_.n_rhat; }
  int rings() const { return spec_.n_rhat - 1; }
  double h() const { return 1.0 / (spec_.n_rhat - 1); }
  double rhat(int ring) const { return (ring + 1) * h(); }
  double r(int ring) const;

  int n_theta_hat() const { return spec_.n_theta_hat; }
  int n_theta() const { return spec_.n_theta_hat / spec_.q; }
  double theta(int j) const { return 2.0 * std::numbers::pi * (j + 0.5) / n_theta(); }
  double theta_hat(int b) const {
    return 2.0 * std::numbers::pi * (b + 0.5) / n_theta_hat();
  }

  int y_dims() const { return spec_.n - 2; }
  int n_y(int dim) const { return spec_.n_y[dim]; }
  double rho(int dim) const { return spec_.rho[dim]; }
  std::size_t y_count() const { return y_count_; }
  /// Row-major flattening, last y-dimension fastest.
  std::vector<int> y_multi_index(std::size_t flat) const;
  std::size_t y_flat_index(const std::vector<int>& multi) const;
  double y(int dim, int index) const { return rho(dim) * index / n_y(dim); }

  /// Sheet shift d with k d = -1 (mod q) paired with a 2 pi / k rotation in x;
  /// see kfold_symmetry_defect.
  int symmetry_sheet_shift() const;

  bool operator==(const Grid& other) const;

 private:
  GridSpec spec_;
  std::size_t y_count_ = 1;
};

int gcd(int a, int b);

}  // namespace branchsolve
