#pragma once

#include <span>
#include <vector>

#include "branchsolve/field.hpp"
#include "branchsolve/fourier.hpp"

namespace branchsolve {

/// Fourier coefficients of an unfolded field in theta_hat and y, one complex
/// radial profile per (m, z) mode and component:
///
///   c_{m,z}(r_hat) = 1/(N_theta_hat N_y) sum_{b,y} u_0 e^{-i(m theta_hat_b + 2 pi z.y / rho)}
///
/// Radial index a runs over the axis (a = 0) and the rings (a = ring + 1), so a
/// profile has n_rhat entries and ends on the boundary r_hat = 1. Mode slots
/// follow DFT order: slot = angular_index * y_count + y_index.
class ModeSpectrum {
 public:
  ModeSpectrum(Grid grid, int components = 1);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  int radial_nodes() const { return grid_.n_rhat(); }
  std::size_t mode_count() const { return modes_; }

  int angular_mode(std::size_t slot) const;
  std::vector<int> y_mode(std::size_t slot) const;
  /// sum_j (2 pi z_j / rho_j)^2
  double kappa2(std::size_t slot) const;
  /// True when m or some z_j is the unpaired Nyquist frequency.
  bool nyquist(std::size_t slot) const;
  /// Slot of (m, z); throws if outside the resolved band.
  std::size_t slot(int m, std::span<const int> z) const;

  cplx& at(int comp, int a, std::size_t slot) { return data_[index(comp, a, slot)]; }
  cplx at(int comp, int a, std::size_t slot) const { return data_[index(comp, a, slot)]; }
  cplx coefficient(int comp, int a, int m, std::span<const int> z) const { return at(comp, a, slot(m, z)); }

  bool admissible_only = false;

  /// sum over radial nodes of r_hat_a |c|^2 for the selected slots (area weighted).
  template <class Pred>
  double energy(Pred&& keep) const {
    double e = 0.0;
    for (int c = 0; c < components_; ++c)
      for (int a = 1; a < radial_nodes(); ++a) {
        const double w = a * grid_.h();
        for (std::size_t s = 0; s < modes_; ++s)
          if (keep(s)) e += w * std::norm(at(c, a, s));
      }
    return e;
  }

 private:
  std::size_t index(int comp, int a, std::size_t slot) const {
    return (static_cast<std::size_t>(comp) * grid_.n_rhat() + a) * modes_ + slot;
  }

  Grid grid_;
  int components_;
  std::size_t modes_;
  std::vector<cplx> data_;
};

ModeSpectrum analyze(const UnfoldedField& g, int threads = 1);
UnfoldedField synthesize(const ModeSpectrum& s, int threads = 1);

/// Forward transform of one unfolded angular/y plane into spectrum slot order.
void analyze_plane(const Grid& grid, std::span<cplx> plane);
/// Inverse of analyze_plane.
void synthesize_plane(const Grid& grid, std::span<cplx> plane);

}  // namespace branchsolve
