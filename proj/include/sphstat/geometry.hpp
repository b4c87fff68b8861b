#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "sphstat/error.hpp"
#include "sphstat/linalg.hpp"

namespace sphstat {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegPerRad = 180.0 / kPi;

/// Tolerances shared across the library.
inline constexpr double kZeroVectorTol = 1e-12;       // |v| below this has no direction
inline constexpr double kUnitConstructionTol = 1e-12; // | |v|-1 | allowed at construction
inline constexpr double kIngestNormTol = 1e-6;        // silent renormalization band on ingest
inline constexpr double kMeanDirectionTol = 1e-10;    // tau0: |m| below this -> undefined mean
inline constexpr double kEigenGapTol = 1e-8;          // tau1: eigen gap below this -> degenerate

/// Unit vector in R^q, q >= 2. Construction validates the norm.
class Direction {
 public:
  explicit Direction(Vec coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) fail(errc::bad_dimension, "direction needs q >= 2");
    const double n = norm(coords_);
    if (std::abs(n - 1.0) > kUnitConstructionTol)
      fail(errc::not_unit, "coordinates are not unit length");
  }

  const Vec& coords() const noexcept { return coords_; }
  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const Direction& a, const Direction& b) {
    return a.coords_ == b.coords_;
  }

 private:
  Vec coords_;
};

/// v / |v|, rejecting near-zero input.
inline Direction normalize(const Vec& v) {
  const double n = norm(v);
  if (n <= kZeroVectorTol) fail(errc::zero_vector, "cannot normalize a (near-)zero vector");
  Vec u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / n;
  return Direction(std::move(u));
}

inline double angle_between(const Direction& a, const Direction& b) {
  return std::acos(std::clamp(dot(a.coords(), b.coords()), -1.0, 1.0));
}

/// The pair {e, -e}, stored as the representative whose first component of
/// magnitude above 1e-12 is positive.
class Axis {
 public:
  explicit Axis(const Direction& d) : rep_(canonical(d)) {}

  const Direction& rep() const noexcept { return rep_; }
  int dim() const noexcept { return rep_.dim(); }

  friend bool operator==(const Axis& a, const Axis& b) { return a.rep_ == b.rep_; }

 private:
  static Direction canonical(const Direction& d) {
    for (double c : d.coords()) {
      if (std::abs(c) <= kZeroVectorTol) continue;
      if (c > 0.0) return d;
      Vec flipped(d.coords());
      for (double& x : flipped) x = -x;
      return Direction(std::move(flipped));
    }
    fail(errc::zero_vector, "axis representative has no nonzero component");
  }

  Direction rep_;
};

inline Axis canonicalize_axis(const Vec& v) { return Axis(normalize(v)); }

enum class PolarConvention { angle_2d, lonlat_3d, dec_inc_3d };

/// Angles in degrees under one of the supported recording conventions:
///   angle_2d    theta in [0, 360)            -> (cos, sin)
///   lonlat_3d   lon in [-180, 180], lat in [-90, 90]
///   dec_inc_3d  dec in [0, 360), inc in [-90, 90], axes (north, east, down)
struct PolarRecord {
  PolarConvention convention;
  std::vector<double> angles_deg;
};

inline Direction polar_to_cartesian(const PolarRecord& rec) {
  const auto deg2rad = [](double d) { return d / kDegPerRad; };
  switch (rec.convention) {
    case PolarConvention::angle_2d: {
      if (rec.angles_deg.size() != 1) fail(errc::dimension_mismatch, "angle-2d takes one angle");
      const double theta = rec.angles_deg[0];
      if (!(theta >= 0.0 && theta < 360.0))
        fail(errc::angle_out_of_range, "theta_deg must lie in [0, 360)");
      const double t = deg2rad(theta);
      return Direction({std::cos(t), std::sin(t)});
    }
    case PolarConvention::lonlat_3d: {
      if (rec.angles_deg.size() != 2) fail(errc::dimension_mismatch, "lonlat takes two angles");
      const double lon = rec.angles_deg[0];
      const double lat = rec.angles_deg[1];
      if (!(lon >= -180.0 && lon <= 180.0)) fail(errc::angle_out_of_range, "lon must lie in [-180, 180]");
      if (!(lat >= -90.0 && lat <= 90.0)) fail(errc::angle_out_of_range, "lat must lie in [-90, 90]");
      const double lo = deg2rad(lon);
      const double la = deg2rad(lat);
      return Direction({std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la)});
    }
    case PolarConvention::dec_inc_3d: {
      if (rec.angles_deg.size() != 2) fail(errc::dimension_mismatch, "dec/inc takes two angles");
      const double dec = rec.angles_deg[0];
      const double inc = rec.angles_deg[1];
      if (!(dec >= 0.0 && dec < 360.0)) fail(errc::angle_out_of_range, "dec must lie in [0, 360)");
      if (!(inc >= -90.0 && inc <= 90.0)) fail(errc::angle_out_of_range, "inc must lie in [-90, 90]");
      const double d = deg2rad(dec);
      const double i = deg2rad(inc);
      // (north, east, down): declination clockwise from north, inclination downward.
      return Direction({std::cos(i) * std::cos(d), std::cos(i) * std::sin(d), std::sin(i)});
    }
  }
  fail(errc::angle_out_of_range, "unknown polar convention");
}

inline PolarRecord cartesian_to_polar(const Direction& d, PolarConvention convention) {
  const auto wrap360 = [](double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    return w < 360.0 ? w : 0.0;
  };
  switch (convention) {
    case PolarConvention::angle_2d: {
      if (d.dim() != 2) fail(errc::dimension_mismatch, "angle-2d requires q=2");
      return {convention, {wrap360(std::atan2(d[1], d[0]) * kDegPerRad)}};
    }
    case PolarConvention::lonlat_3d: {
      if (d.dim() != 3) fail(errc::dimension_mismatch, "lonlat requires q=3");
      const double lat = std::asin(std::clamp(d[2], -1.0, 1.0)) * kDegPerRad;
      const double lon = std::atan2(d[1], d[0]) * kDegPerRad;
      return {convention, {lon, lat}};
    }
    case PolarConvention::dec_inc_3d: {
      if (d.dim() != 3) fail(errc::dimension_mismatch, "dec/inc requires q=3");
      const double inc = std::asin(std::clamp(d[2], -1.0, 1.0)) * kDegPerRad;
      const double dec = wrap360(std::atan2(d[1], d[0]) * kDegPerRad);
      return {convention, {dec, inc}};
    }
  }
  fail(errc::angle_out_of_range, "unknown polar convention");
}

/// Deterministic tangent basis at `pole` (q=3): Gram-Schmidt the coordinate
/// axis least aligned with the pole, then complete with the cross product.
inline std::array<Vec, 2> tangent_frame(const Direction& pole) {
  if (pole.dim() != 3) fail(errc::dimension_mismatch, "tangent frame requires q=3");
  std::size_t least = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(pole[i]) < std::abs(pole[least])) least = i;
  Vec u(3, 0.0);
  u[least] = 1.0;
  const double proj = pole[least];
  for (std::size_t i = 0; i < 3; ++i) u[i] -= proj * pole[i];
  const double un = norm(u);
  for (double& x : u) x /= un;
  const Vec& p = pole.coords();
  Vec w = {p[1] * u[2] - p[2] * u[1], p[2] * u[0] - p[0] * u[2], p[0] * u[1] - p[1] * u[0]};
  return {std::move(u), std::move(w)};
}

/// Lambert azimuthal equal-area projection centered at `pole`: angular
/// distance theta maps to planar radius 2 sin(theta/2); azimuth is taken in
/// the deterministic tangent frame. Input must lie in the closed hemisphere.
inline std::array<double, 2> lambert_project(const Direction& d, const Direction& pole) {
  if (d.dim() != 3 || pole.dim() != 3) fail(errc::dimension_mismatch, "lambert projection requires q=3");
  const double c = dot(d.coords(), pole.coords());
  if (c < -kZeroVectorTol) fail(errc::wrong_hemisphere, "point lies outside the projection hemisphere");
  const double cos_theta = std::clamp(c, -1.0, 1.0);
  const double r = std::sqrt(std::max(0.0, 2.0 * (1.0 - cos_theta)));
  const auto frame = tangent_frame(pole);
  const double pu = dot(d.coords(), frame[0]);
  const double pw = dot(d.coords(), frame[1]);
  const double s = std::hypot(pu, pw);
  if (s <= 1e-15) return {0.0, 0.0};
  return {r * pu / s, r * pw / s};
}

/// Inverse of lambert_project on the hemisphere disk (planar radius <= sqrt(2)).
inline Direction lambert_unproject(double px, double py, const Direction& pole) {
  if (pole.dim() != 3) fail(errc::dimension_mismatch, "lambert projection requires q=3");
  const double r = std::hypot(px, py);
  if (r > std::sqrt(2.0) + 1e-9) fail(errc::wrong_hemisphere, "planar point outside hemisphere disk");
  if (r <= 1e-15) return pole;
  const double cos_theta = 1.0 - 0.5 * r * r;
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const auto frame = tangent_frame(pole);
  Vec out(3);
  for (std::size_t i = 0; i < 3; ++i)
    out[i] = cos_theta * pole[i] + sin_theta * (px * frame[0][i] + py * frame[1][i]) / r;
  return normalize(out);
}

}  // namespace sphstat
