#include "branchsolve/holder.hpp"

#include <cmath>
#include <fmt/core.h>
#include <numbers>
#include <random>

#include "branchsolve/error.hpp"
#include "branchsolve/parallel.hpp"
#include "branchsolve/unfold.hpp"

namespace branchsolve {

namespace {

struct Node {
  int ring;
  int j;
  std::size_t y;
};

class PairScorer {
 public:
  PairScorer(const SheetedField& f, double mu) : f_(f), g_(f.grid()), mu_(mu) {}

  double score(int sheet, const Node& a, const Node& b) const {
    const double ra = g_.r(a.ring), rb = g_.r(b.ring);
    const double ta = g_.theta(a.j), tb = g_.theta(b.j);
    double d2 = std::pow(ra * std::cos(ta) - rb * std::cos(tb), 2) + std::pow(ra * std::sin(ta) - rb * std::sin(tb), 2);
    if (a.y != b.y) {
      const auto ia = g_.y_multi_index(a.y), ib = g_.y_multi_index(b.y);
      for (int d = 0; d < g_.y_dims(); ++d) {
        double dy = std::abs(g_.y(d, ia[d]) - g_.y(d, ib[d]));
        dy = std::min(dy, g_.rho(d) - dy);
        d2 += dy * dy;
      }
    }
    if (d2 <= 0.0) return 0.0;
    double v2 = 0.0;
    for (int c = 0; c < f_.components(); ++c) {
      const double dv = f_.at(c, sheet, a.ring, a.j, a.y) - f_.at(c, sheet, b.ring, b.j, b.y);
      v2 += dv * dv;
    }
    return std::sqrt(v2) / std::pow(d2, 0.5 * mu_);
  }

 private:
  const SheetedField& f_;
  const Grid& g_;
  double mu_;
};

std::vector<int> stride_offsets(int count) {
  std::vector<int> out;
  if (count <= 256) {
    for (int s = 1; s < count; ++s) out.push_back(s);
  } else {
    for (int s = 1; s < count; s *= 2) out.push_back(s);
  }
  return out;
}

}  // namespace

NormReport holder_seminorm(const SheetedField& input, double mu, int derivative_order, std::uint64_t seed,
                           int threads) {
  if (!(mu > 0.0 && mu <= 1.0)) throw InvalidProblem(fmt::format("Holder exponent {} not in (0, 1]", mu));
  if (derivative_order != 0 && derivative_order != 1)
    throw InvalidProblem("derivative order must be 0 or 1");
  const SheetedField f = derivative_order == 0 ? input : gradient_x(unfold(input), threads);
  const Grid& g = f.grid();

  NormReport report;
  report.holder_mu = mu;
  report.per_sheet.assign(g.q(), 0.0);
  for (int l = 0; l < g.q(); ++l)
    for (int i = 0; i < g.rings(); ++i)
      for (int j = 0; j < g.n_theta(); ++j)
        for (std::size_t y = 0; y < g.y_count(); ++y) {
          double v2 = 0.0;
          for (int c = 0; c < f.components(); ++c) v2 += f.at(c, l, i, j, y) * f.at(c, l, i, j, y);
          report.sup_abs = std::max(report.sup_abs, std::sqrt(v2));
        }

  const PairScorer scorer(f, mu);
  std::vector<double> per_task(static_cast<std::size_t>(g.q()) * 2, 0.0);
  parallel_for(per_task.size(), threads, [&](std::size_t task) {
    const int l = static_cast<int>(task / 2);
    const int side = static_cast<int>(task % 2);
    std::vector<int> js;
    for (int j = 0; j < g.n_theta(); ++j)
      if ((g.theta(j) < std::numbers::pi) == (side == 0)) js.push_back(j);
    // nodes of one ring in this half plane
    const int per_ring = static_cast<int>(js.size() * g.y_count());
    auto node_of = [&](int ring, int k) {
      return Node{ring, js[k / g.y_count()], static_cast<std::size_t>(k) % g.y_count()};
    };
    double best = 0.0;
    const auto offsets = stride_offsets(per_ring);
    for (int i = 0; i < g.rings(); ++i)
      for (int a = 0; a < per_ring; ++a)
        for (int s : offsets) {
          if (per_ring <= 256 && a + s >= per_ring) break;
          const int b = (a + s) % per_ring;
          best = std::max(best, scorer.score(l, node_of(i, a), node_of(i, b)));
        }
    for (int i = 0; i < g.rings(); ++i)
      for (int gap = 1; i + gap < g.rings(); gap *= 2)
        for (int a = 0; a < per_ring; ++a) best = std::max(best, scorer.score(l, node_of(i, a), node_of(i + gap, a)));
    // stratified random sample: one partner per node drawn across the whole half plane
    std::mt19937_64 rng(seed + 1000003ULL * task);
    std::uniform_int_distribution<int> ring_dist(0, g.rings() - 1), node_dist(0, per_ring - 1);
    for (int i = 0; i < g.rings(); ++i)
      for (int a = 0; a < per_ring; ++a) {
        const Node other = node_of(ring_dist(rng), node_dist(rng));
        best = std::max(best, scorer.score(l, node_of(i, a), other));
      }
    per_task[task] = best;
  });
  for (int l = 0; l < g.q(); ++l) {
    report.per_sheet[l] = per_task[2 * l] + per_task[2 * l + 1];
    report.holder_seminorm_estimate += report.per_sheet[l];
  }
  return report;
}

}  // namespace branchsolve
