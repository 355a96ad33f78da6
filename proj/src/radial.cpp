#include "branchsolve/radial.hpp"

#include <cmath>
#include <fmt/core.h>
#include <numbers>

#include "branchsolve/error.hpp"

namespace branchsolve {

namespace {

struct Row {
  double lower = 0.0;
  double diag = 0.0;
  double upper = 0.0;
};

// Row a of the operator for a < A.
Row operator_row(int a, int nodes, int m, double kappa2, int q) {
  const double h = 1.0 / (nodes - 1);
  if (a == 0) {
    if (m != 0) return {0.0, 1.0, 0.0};
    const double lam = conformal_jacobian(q, 0.0) * kappa2;
    return {0.0, -4.0 / (h * h) - lam, 4.0 / (h * h)};
  }
  const double r = a * h;
  const double rp = r + 0.5 * h;
  const double rm = r - 0.5 * h;
  const double s = 1.0 / (r * h * h);
  const double lam = conformal_jacobian(q, r) * kappa2;
  const double lower = (a == 1 && m != 0) ? 0.0 : rm * s;
  return {lower, -(rp + rm) * s - static_cast<double>(m) * m / (r * r) - lam, rp * s};
}

}  // namespace

RadialProfile radial_solve(int m, double kappa2, int q, std::span<const cplx> rhs, cplx bc) {
  const int nodes = static_cast<int>(rhs.size());
  if (nodes < 3) throw ResolutionError("radial grid needs at least 3 nodes");
  const int A = nodes - 1;
  // Thomas on rows 0..A-1 with u_A = bc moved to the right-hand side.
  std::vector<double> cp(A);
  std::vector<cplx> dp(A);
  RadialProfile u(nodes);
  for (int a = 0; a < A; ++a) {
    Row row = operator_row(a, nodes, m, kappa2, q);
    // for m != 0 the axis row pins u_0 = 0 and ring 1 no longer couples to it
    cplx d = (a == 0 && m != 0) ? cplx(0.0) : rhs[a];
    if (a == A - 1) {
      d -= row.upper * bc;
      row.upper = 0.0;
    }
    const double denom = a == 0 ? row.diag : row.diag - row.lower * cp[a - 1];
    if (!std::isfinite(denom) || std::abs(denom) < 1e-300)
      throw NumericError(fmt::format("singular radial system (m={}, row {})", m, a));
    cp[a] = row.upper / denom;
    dp[a] = (a == 0 ? d : d - row.lower * dp[a - 1]) / denom;
  }
  u[A] = bc;
  u[A - 1] = dp[A - 1];
  for (int a = A - 2; a >= 0; --a) u[a] = dp[a] - cp[a] * u[a + 1];
  return u;
}

RadialProfile radial_apply(int m, double kappa2, int q, std::span<const cplx> u) {
  const int nodes = static_cast<int>(u.size());
  const int A = nodes - 1;
  RadialProfile out(nodes);
  for (int a = 0; a < A; ++a) {
    const Row row = operator_row(a, nodes, m, kappa2, q);
    if (a == 0 && m != 0) continue;
    out[a] = row.diag * u[a] + row.upper * u[a + 1] + (a > 0 ? row.lower * u[a - 1] : cplx(0.0));
  }
  return out;
}

RadialProfile radial_mode_solve(int m, std::span<const int> z, int q, std::span<const double> rho,
                                std::span<const cplx> rhs, cplx bc) {
  if (z.size() != rho.size()) throw DimensionError("y-mode and period counts differ");
  double kappa2 = 0.0;
  for (std::size_t d = 0; d < z.size(); ++d) {
    const double kap = 2.0 * std::numbers::pi * z[d] / rho[d];
    kappa2 += kap * kap;
  }
  const int nodes = static_cast<int>(rhs.size());
  const double h = 1.0 / (nodes - 1);
  std::vector<cplx> scaled(rhs.begin(), rhs.end());
  for (int a = 0; a < nodes; ++a) scaled[a] *= conformal_jacobian(q, a * h);
  return radial_solve(m, kappa2, q, scaled, bc);
}

}  // namespace branchsolve
