#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sphstat/error.hpp"
#include "sphstat/geometry.hpp"

namespace sphstat {

/// Ordered sample of unit vectors sharing one dimension; the empirical
/// distribution puts mass 1/n on each point.
class DirectionSample {
 public:
  explicit DirectionSample(std::vector<Direction> points) : points_(std::move(points)) {
    if (points_.empty()) fail(errc::bad_dimension, "sample must contain at least one point");
    const int q = points_.front().dim();
    for (const Direction& d : points_)
      if (d.dim() != q) fail(errc::dimension_mismatch, "mixed dimensions in sample");
  }

  int dim() const noexcept { return points_.front().dim(); }
  std::size_t size() const noexcept { return points_.size(); }
  const Direction& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Direction>& points() const noexcept { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

 private:
  std::vector<Direction> points_;
};

/// Ordered sample of axes sharing one dimension.
class AxisSample {
 public:
  explicit AxisSample(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) fail(errc::bad_dimension, "sample must contain at least one axis");
    const int q = axes_.front().dim();
    for (const Axis& a : axes_)
      if (a.dim() != q) fail(errc::dimension_mismatch, "mixed dimensions in sample");
  }

  int dim() const noexcept { return axes_.front().dim(); }
  std::size_t size() const noexcept { return axes_.size(); }
  const Axis& operator[](std::size_t i) const { return axes_[i]; }
  const std::vector<Axis>& axes() const noexcept { return axes_; }
  auto begin() const { return axes_.begin(); }
  auto end() const { return axes_.end(); }

 private:
  std::vector<Axis> axes_;
};

/// Identify each direction with its axis (canonical-sign representative).
inline AxisSample axialize(const DirectionSample& sample) {
  std::vector<Axis> axes;
  axes.reserve(sample.size());
  for (const Direction& d : sample) axes.emplace_back(d);
  return AxisSample(std::move(axes));
}

/// Axes viewed as directions on the canonical hemisphere S_q^+.
inline DirectionSample hemisphere_representation(const AxisSample& sample) {
  std::vector<Direction> pts;
  pts.reserve(sample.size());
  for (const Axis& a : sample) pts.push_back(a.rep());
  return DirectionSample(std::move(pts));
}

}  // namespace sphstat
