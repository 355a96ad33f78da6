#include "branchsolve/grid.hpp"

#include <cmath>
#include <fmt/core.h>

#include "branchsolve/error.hpp"

namespace branchsolve {

int gcd(int a, int b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b != 0) {
    const int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Grid::Grid(GridSpec spec) : spec_(std::move(spec)) {
  if (spec_.q < 1) throw InvalidProblem(fmt::format("q must be >= 1, got {}", spec_.q));
  if (spec_.k < 1) throw InvalidProblem(fmt::format("k must be >= 1, got {}", spec_.k));
  if (gcd(spec_.k, spec_.q) != 1)
    throw InvalidProblem(fmt::format("k={} and q={} are not coprime", spec_.k, spec_.q));
  if (spec_.q >= 2 && spec_.k <= spec_.q)
    throw InvalidProblem(fmt::format("need k > q, got k={} q={}", spec_.k, spec_.q));
  if (spec_.n < 3 || spec_.n > 4)
    throw InvalidProblem(fmt::format("supported ambient dimensions are 3 and 4, got {}", spec_.n));
  if (spec_.n_rhat < 3) throw ResolutionError("need at least 3 radial nodes");
  if (spec_.n_theta_hat <= 0 || spec_.n_theta_hat % (spec_.k * spec_.q) != 0)
    throw ResolutionError(fmt::format("N_theta_hat={} is not a multiple of k*q={}",
                                      spec_.n_theta_hat, spec_.k * spec_.q));
  const auto dims = static_cast<std::size_t>(spec_.n - 2);
  if (spec_.n_y.size() != dims || spec_.rho.size() != dims)
    throw DimensionError(fmt::format("n={} needs {} y-resolutions and periods", spec_.n, dims));
  y_count_ = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    if (spec_.n_y[d] < 1) throw ResolutionError("N_y must be positive");
    if (!(spec_.rho[d] > 0.0)) throw InvalidProblem("periods rho_j must be positive");
    y_count_ *= static_cast<std::size_t>(spec_.n_y[d]);
  }
}

double Grid::r(int ring) const {
  const double rh = rhat(ring);
  return ring == rings() - 1 ? 1.0 : std::pow(rh, spec_.q);
}

std::vector<int> Grid::y_multi_index(std::size_t flat) const {
  std::vector<int> out(static_cast<std::size_t>(y_dims()));
  for (int d = y_dims() - 1; d >= 0; --d) {
    out[d] = static_cast<int>(flat % static_cast<std::size_t>(n_y(d)));
    flat /= static_cast<std::size_t>(n_y(d));
  }
  return out;
}

std::size_t Grid::y_flat_index(const std::vector<int>& multi) const {
  std::size_t flat = 0;
  for (int d = 0; d < y_dims(); ++d) {
    const int nd = n_y(d);
    const int c = ((multi[d] % nd) + nd) % nd;
    flat = flat * static_cast<std::size_t>(nd) + static_cast<std::size_t>(c);
  }
  return flat;
}

int Grid::symmetry_sheet_shift() const {
  const int q = spec_.q;
  if (q == 1) return 0;
  for (int d = 0; d < q; ++d)
    if ((spec_.k * d + 1) % q == 0) return d;
  throw InvalidProblem("no sheet shift solves k d = -1 mod q");
}

bool Grid::operator==(const Grid& other) const {
  return spec_.q == other.spec_.q && spec_.k == other.spec_.k && spec_.n == other.spec_.n &&
         spec_.n_rhat == other.spec_.n_rhat && spec_.n_theta_hat == other.spec_.n_theta_hat &&
         spec_.n_y == other.spec_.n_y && spec_.rho == other.spec_.rho;
}

}  // namespace branchsolve
