#include "branchsolve/field.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>

#include "branchsolve/error.hpp"

namespace branchsolve {

namespace {

double max_abs_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SheetedField::SheetedField(Grid grid, int components)
    : grid_(std::move(grid)), components_(components) {
  if (components_ < 1) throw DimensionError("a field needs at least one component");
  values_.assign(static_cast<std::size_t>(components_) * grid_.q() * grid_.rings() *
                     grid_.n_theta() * grid_.y_count(),
                 0.0);
}

void SheetedField::set_axis(std::vector<double> axis) {
  if (axis.size() != static_cast<std::size_t>(components_) * grid_.y_count())
    throw DimensionError(fmt::format("axis trace has {} values, expected {}", axis.size(),
                                     components_ * grid_.y_count()));
  axis_ = std::move(axis);
}

double SheetedField::max_abs() const { return max_abs_of(values_); }

void require_same_layout(const SheetedField& a, const SheetedField& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components())
    throw DimensionError("fields live on different grids or have different component counts");
}

SheetedField& SheetedField::operator+=(const SheetedField& other) {
  require_same_layout(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  if (axis_ && other.axis_) {
    for (std::size_t i = 0; i < axis_->size(); ++i) (*axis_)[i] += (*other.axis_)[i];
  } else {
    axis_.reset();
  }
  return *this;
}

SheetedField& SheetedField::operator-=(const SheetedField& other) {
  require_same_layout(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  if (axis_ && other.axis_) {
    for (std::size_t i = 0; i < axis_->size(); ++i) (*axis_)[i] -= (*other.axis_)[i];
  } else {
    axis_.reset();
  }
  return *this;
}

SheetedField& SheetedField::operator*=(double s) {
  for (double& v : values_) v *= s;
  if (axis_)
    for (double& v : *axis_) v *= s;
  return *this;
}

SheetedField operator+(SheetedField a, const SheetedField& b) { return a += b; }
SheetedField operator-(SheetedField a, const SheetedField& b) { return a -= b; }
SheetedField operator*(double s, SheetedField a) { return a *= s; }

UnfoldedField::UnfoldedField(Grid grid, int components)
    : grid_(std::move(grid)), components_(components) {
  if (components_ < 1) throw DimensionError("a field needs at least one component");
  values_.assign(static_cast<std::size_t>(components_) * grid_.rings() * grid_.n_theta_hat() *
                     grid_.y_count(),
                 0.0);
  axis_.assign(static_cast<std::size_t>(components_) * grid_.y_count(), 0.0);
}

double UnfoldedField::max_abs() const {
  return std::max(max_abs_of(values_), max_abs_of(axis_));
}

UnfoldedField& UnfoldedField::operator+=(const UnfoldedField& other) {
  if (!(grid_ == other.grid_) || components_ != other.components_)
    throw DimensionError("unfolded fields have different layouts");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  for (std::size_t i = 0; i < axis_.size(); ++i) axis_[i] += other.axis_[i];
  return *this;
}

UnfoldedField& UnfoldedField::operator-=(const UnfoldedField& other) {
  if (!(grid_ == other.grid_) || components_ != other.components_)
    throw DimensionError("unfolded fields have different layouts");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  for (std::size_t i = 0; i < axis_.size(); ++i) axis_[i] -= other.axis_[i];
  return *this;
}

UnfoldedField& UnfoldedField::operator*=(double s) {
  for (double& v : values_) v *= s;
  for (double& v : axis_) v *= s;
  return *this;
}

}  // namespace branchsolve
