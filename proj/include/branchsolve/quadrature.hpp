#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "branchsolve/field.hpp"
#include "branchsolve/spectrum.hpp"

namespace branchsolve {

/// Volume dx dy attached to each sheeted node of ring `ring` (same on every
/// sheet and angle); the boundary ring carries half a cell.
double node_volume(const Grid& grid, int ring);

/// (sum_l int |f_l|^p)^{1/p} over nodes with r^2 + |y - y_c|^2 < radius^2 (radius <= 0: all nodes).
double lp_norm(const SheetedField& f, double p, double radius = 0.0);

/// Evaluates a sheeted field off-grid: trigonometric sums in theta_hat and y,
/// cubic Lagrange interpolation of each mode profile in r_hat. Modes below
/// `drop` times the largest coefficient are skipped.
class FieldInterpolator {
 public:
  explicit FieldInterpolator(const SheetedField& f, double drop = 1e-14);

  struct Value {
    double u2 = 0.0;     // sum over sheets and components of u^2
    double grad2 = 0.0;  // sum over sheets and components of |D_x u|^2 + |D_y u|^2
  };
  /// x = r e^{i theta}, y as coordinates; sums over the q preimages.
  Value eval(double r, double theta, const std::vector<double>& y) const;

 private:
  struct Mode {
    int comp;
    int m;
    std::vector<double> kappa;
    std::vector<cplx> profile;  // n_rhat entries, axis first
  };
  Grid grid_;
  int components_;
  std::vector<Mode> modes_;
};

struct RatioStats {
  double max = 0.0;
  double mean = 0.0;
  std::vector<double> samples;
};

/// Random smooth average-free field (unfolded modes m != 0 mod q with random
/// complex amplitudes and profiles r_hat^|m| (a + b r_hat^2)). With `compact`,
/// multiplied by (1 - r_hat^2)^2 and a y-bump so it vanishes near the boundary
/// of a ball.
SheetedField random_average_free_field(const Grid& grid, std::mt19937_64& rng, bool compact);

/// ||u - l||_{L^2(B_R)} / (R ||Du||_{L^2(B_R)}) over `samples` seeded random
/// average-free fields, l the mean of the sheet average over B_R.
RatioStats poincare_ratios(const Grid& grid, int samples = 100, std::uint64_t seed = 42, double radius = 1.0);

/// ||u||_{L^{2n/(n-2)}} / ||Du||_{L^2} over compactly supported random fields.
RatioStats sobolev_ratios(const Grid& grid, int samples = 100, std::uint64_t seed = 43);

}  // namespace branchsolve
