#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "branchsolve/field.hpp"

namespace branchsolve {

struct DecayFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  std::vector<double> radii;
  std::vector<double> sup_values;
};

/// Least-squares slope of log sup_{theta,y,sheets} |f| (or |D f|) against log r
/// over the rings with r in [r_min, r_max].
DecayFit decay_exponent(const SheetedField& f, bool use_gradient, double r_min, double r_max, int threads = 1);

struct FrequencyProfile {
  std::vector<double> y0;
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> numerators;    // rho^{2-n} int_{B_rho} sum_l |Du_l|^2
  std::vector<double> denominators;  // rho^{1-n} int_{dB_rho} sum_l |u_l|^2
};

struct FrequencyOptions {
  int radial_nodes = 48;  // Gauss-Legendre in the ball radius
  int polar_nodes = 64;   // Gauss-Legendre in cos(phi)
  int azimuth_nodes = 96; // trapezoid
};

/// N(rho) = rho int_{B_rho(0,y0)} |Du|^2 / int_{dB_rho(0,y0)} |u|^2, summed over
/// sheets, by spherical quadrature of an off-grid interpolant. n = 3 only.
FrequencyProfile frequency_function(const SheetedField& f, const std::vector<double>& y0,
                                    const std::vector<double>& radii, const FrequencyOptions& opts = {});

struct BranchTrace {
  std::vector<double> values;                    // axis value per y-node, component 0
  std::vector<std::vector<double>> derivatives;  // orders 1..4 along y_1
  double max_fourth_difference = 0.0;            // max |Delta^4 trace| on the grid
};

/// Axis trace {(0, y, u(0, y))}; taken from the unfolded m = 0 synthesis.
BranchTrace branch_set(const SheetedField& f);

struct CauchyRow {
  int p = 0;
  double S_p = 0.0;
  double C_p = 0.0;
};

struct CauchyFit {
  double C_estimate = 0.0;
  std::vector<CauchyRow> table;
  double tail_fraction = 0.0;
  bool unreliable = false;
};

/// S_p = sup |D_y^p f| (spectral, max over y-directions), S_0 = sup |f|,
/// C_p = (S_p R^p / (S_0 p!))^{1/p}, C_estimate = max_p C_p.
CauchyFit cauchy_bound_fit(const SheetedField& f, int p_max, double R);

/// sup over non-boundary nodes (and the axis trace) minus sup over the boundary ring, max over components.
double max_principle_check(const SheetedField& f);

void write_decay_csv(std::ostream& os, const DecayFit& fit);
void write_frequency_csv(std::ostream& os, const FrequencyProfile& p);
void write_cauchy_csv(std::ostream& os, const CauchyFit& fit);

}  // namespace branchsolve
