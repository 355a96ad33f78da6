#pragma once

#include <span>
#include <vector>

#include "branchsolve/field.hpp"

namespace branchsolve {

/// An unordered q-tuple of points in R^m. Storage order is arbitrary; every
/// operation on a QTuple is invariant under permuting the points.
class QTuple {
 public:
  QTuple(int q, int m, std::vector<double> values);

  int q() const { return q_; }
  int m() const { return m_; }
  std::span<const double> point(int l) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(l) * m_, m_);
  }

 private:
  int q_;
  int m_;
  std::vector<double> values_;
};

/// Distance between unordered tuples: min over permutations sigma of
/// sqrt(sum_l |a_l - b_sigma(l)|^2). Exhaustive for q <= 6, Hungarian above.
double metric_G(const QTuple& a, const QTuple& b);

/// The tuple {u_1(X), ..., u_q(X)} of one component-block at a node.
QTuple tuple_at(const SheetedField& f, int ring, int j, std::size_t y);

struct AverageFreeSplit {
  SheetedField average;  // identical on every sheet
  SheetedField free;     // sums to zero over sheets at every node
};

AverageFreeSplit average_free_decompose(const SheetedField& f);

struct SheetNode {
  int sheet;
  int j;
};

/// Image of (sheet, theta_j) under rotation of x by 2 pi / k combined with the
/// sheet relabelling that corresponds to rotating the unfolded disk by a
/// multiple of 2 pi / k: the sheet advances by d (k d = -1 mod q) plus one more
/// when the rotation crosses the cut.
SheetNode rotate_node(const Grid& grid, int sheet, int j);

/// max over nodes |f(rotated node) - f(node)|; 0 iff discretely k-fold symmetric.
double kfold_symmetry_defect(const SheetedField& f);

/// Defect of the flux equivariance f^j(rotated) = R^j_p f^p for a flux with
/// `system_size` blocks of n components (x1, x2, y_1, ...).
double flux_equivariance_defect(const SheetedField& flux, int system_size = 1);

/// Average over the k rotation-relabel actions.
SheetedField symmetrize(const SheetedField& f);

/// (f_l(x, y + h eta) - f_l(x, y)) / h per sheet. Exact grid shift when h*eta
/// lands on the y-grid, trigonometric interpolation otherwise.
SheetedField difference_quotient(const SheetedField& f, double h, std::span<const double> eta);

}  // namespace branchsolve
