#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "branchsolve/generators.hpp"
#include "branchsolve/grid.hpp"

namespace branchsolve {

/// Flat `key = value` run description; `#` starts a comment. Unknown keys are
/// rejected so typos surface early.
struct RunConfig {
  std::string command;  // solve-poisson | solve-nonlinear | diagnose | gen-example | cross-check
  GridSpec grid;

  // boundary data: zero | harmonic | harmonic_kernel | manufactured | file
  std::string boundary = "harmonic";
  int boundary_m = 0;          // 0: use k
  double boundary_amp = 1.0;
  std::vector<int> boundary_ymod;  // y-mode of the cos modulation (test data)
  double kernel_a = 0.25;          // harmonic_kernel: Poisson kernel parameter in y
  std::string boundary_file;
  std::string g_file;
  std::string f_file;
  std::string field_file;          // diagnose: field to analyse (default: solve first)
  std::vector<ManufacturedMode> manufactured;

  std::string nonlinearity = "mse";
  double epsilon = 1.0;  // scales the boundary data
  double tol = 1e-9;
  double residual_tol = 1e-8;
  int max_iters = 30;
  double relaxation = 1.0;
  double mu = 0.25;

  double decay_rmin = 1e-6;
  double decay_rmax = 1e-2;
  std::vector<double> freq_radii{0.1, 0.2, 0.4};
  int cauchy_pmax = 6;
  double cauchy_R = 0.25;

  int threads = 0;  // 0: not set
  std::uint64_t seed = 1;
  std::string out = "out";
};

RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::filesystem::path& path);

/// "m=3,z=1,amp=1,beta=0.5,fr=0.2,ft=0.1,fy=0.3; m=9,..." (complex values as re/im, e.g. amp=1/0.5).
std::vector<ManufacturedMode> parse_manufactured(const std::string& spec, int y_dims);

}  // namespace branchsolve
