#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "branchsolve/grid.hpp"

namespace branchsolve {

/// Discrete q-valued function on the cut cylinder: q sheets over the polar
/// grid (rings x theta_j) times the periodic y-grid, with `components` values
/// per node (codomain R^m, or m*n flux components).
///
/// Sheets are glued so that crossing theta = 2 pi on sheet l continues onto
/// sheet l+1 (sheet q continues onto sheet 1). Sheets are 0-based in memory.
/// The optional axis trace holds values on {0} x torus, which is not a grid
/// node of the cut domain; solvers set it, fold/unfold carry it.
class SheetedField {
 public:
  SheetedField(Grid grid, int components = 1);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int comp, int sheet, int ring, int j, std::size_t y) const {
    return (((static_cast<std::size_t>(comp) * grid_.q() + sheet) * grid_.rings() + ring) *
                grid_.n_theta() + j) * grid_.y_count() + y;
  }
  double& at(int comp, int sheet, int ring, int j, std::size_t y) {
    return values_[index(comp, sheet, ring, j, y)];
  }
  double at(int comp, int sheet, int ring, int j, std::size_t y) const {
    return values_[index(comp, sheet, ring, j, y)];
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  const std::optional<std::vector<double>>& axis() const { return axis_; }
  void set_axis(std::vector<double> axis);
  void clear_axis() { axis_.reset(); }

  double max_abs() const;

  SheetedField& operator+=(const SheetedField& other);
  SheetedField& operator-=(const SheetedField& other);
  SheetedField& operator*=(double s);

 private:
  Grid grid_;
  int components_;
  std::vector<double> values_;
  std::optional<std::vector<double>> axis_;  // [comp][y]
};

SheetedField operator+(SheetedField a, const SheetedField& b);
SheetedField operator-(SheetedField a, const SheetedField& b);
SheetedField operator*(double s, SheetedField a);

/// Single-valued field on the unfolded disk x torus. Angular index b wraps
/// modulo n_theta_hat; the axis value (per component and y-node) is explicit.
class UnfoldedField {
 public:
  UnfoldedField(Grid grid, int components = 1);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int comp, int ring, int b, std::size_t y) const {
    return ((static_cast<std::size_t>(comp) * grid_.rings() + ring) * grid_.n_theta_hat() + b) *
               grid_.y_count() + y;
  }
  double& at(int comp, int ring, int b, std::size_t y) { return values_[index(comp, ring, b, y)]; }
  double at(int comp, int ring, int b, std::size_t y) const {
    return values_[index(comp, ring, b, y)];
  }
  double& axis(int comp, std::size_t y) { return axis_[comp * grid_.y_count() + y]; }
  double axis(int comp, std::size_t y) const { return axis_[comp * grid_.y_count() + y]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> axis_values() { return axis_; }
  std::span<const double> axis_values() const { return axis_; }

  double max_abs() const;

  UnfoldedField& operator+=(const UnfoldedField& other);
  UnfoldedField& operator-=(const UnfoldedField& other);
  UnfoldedField& operator*=(double s);

 private:
  Grid grid_;
  int components_;
  std::vector<double> values_;
  std::vector<double> axis_;
};

void require_same_layout(const SheetedField& a, const SheetedField& b);

}  // namespace branchsolve
