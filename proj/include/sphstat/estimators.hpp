#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sphstat/error.hpp"
#include "sphstat/geometry.hpp"
#include "sphstat/linalg.hpp"
#include "sphstat/samples.hpp"

namespace sphstat {

namespace detail {

/// Coordinatewise mean of a cloud; one fixed accumulation order so every
/// caller of the same points gets the same bits.
inline Vec mean_point(const std::vector<Vec>& pts) {
  const std::size_t n = pts.size();
  Vec m(pts.front().size(), 0.0);
  for (const Vec& p : pts)
    for (std::size_t c = 0; c < m.size(); ++c) m[c] += p[c];
  const double inv = 1.0 / static_cast<double>(n);
  for (double& x : m) x *= inv;
  return m;
}

inline Vec unit_of(const Vec& m, errc on_zero, const char* what) {
  const double nm = norm(m);
  if (nm <= kMeanDirectionTol) fail(on_zero, what);
  Vec u(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) u[i] = m[i] / nm;
  return u;
}

}  // namespace detail

/// m(P_hat) = n^{-1} sum x_i; norm lies in [0, 1].
inline Vec resultant_mean(const DirectionSample& sample) {
  const std::size_t n = sample.size();
  Vec m(static_cast<std::size_t>(sample.dim()), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& p = sample[i].coords();
    for (std::size_t c = 0; c < m.size(); ++c) m[c] += p[c];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& x : m) x *= inv;
  return m;
}

/// mu_hat = m / |m|; undefined when the resultant is (near-)zero.
inline Direction mean_direction(const DirectionSample& sample) {
  const Vec m = resultant_mean(sample);
  return Direction(detail::unit_of(m, errc::undefined_mean_direction,
                                   "resultant mean is too close to zero"));
}

/// delta_hat = 2(1 - |m|), in [0, 2]; total (no precondition).
inline double directional_dispersion(const DirectionSample& sample) {
  return 2.0 * (1.0 - norm(resultant_mean(sample)));
}

/// Mean of the rank-1 projections x x'; symmetric, PSD, unit trace.
struct ScatterMatrix {
  int q = 0;
  Vec entries;  // row-major q x q

  double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * q + j]; }
};

inline ScatterMatrix scatter_matrix(const AxisSample& sample) {
  const int q = sample.dim();
  const std::size_t qu = static_cast<std::size_t>(q);
  ScatterMatrix m;
  m.q = q;
  m.entries.assign(qu * qu, 0.0);
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const Vec& x = sample[k].rep().coords();
    for (std::size_t i = 0; i < qu; ++i)
      for (std::size_t j = i; j < qu; ++j) m.entries[i * qu + j] += x[i] * x[j];
  }
  const double inv = 1.0 / static_cast<double>(sample.size());
  for (std::size_t i = 0; i < qu; ++i)
    for (std::size_t j = i; j < qu; ++j) {
      m.entries[i * qu + j] *= inv;
      m.entries[j * qu + i] = m.entries[i * qu + j];
    }
  return m;
}

/// Top eigenpair of a scatter matrix: the mean axis, its eigenvalue, and the
/// gap to the second eigenvalue.
struct AxialLocation {
  Axis axis;
  double lambda_max = 0.0;
  double eigen_gap = 0.0;
};

inline AxialLocation mean_axis(const ScatterMatrix& m) {
  const SymmetricEigen eig = jacobi_eigensolve(m.entries, m.q);
  const double gap = eig.values[0] - eig.values[1];
  if (gap < kEigenGapTol)
    fail(errc::degenerate_top_eigenvalue, "top eigenvalue of the scatter matrix is not unique");
  return AxialLocation{Axis(Direction(eig.vectors[0])), eig.values[0], gap};
}

inline AxialLocation mean_axis(const AxisSample& sample) { return mean_axis(scatter_matrix(sample)); }

/// gamma_hat = 2(1 - lambda_max); total, tolerates tied eigenvalues.
inline double axial_dispersion(const AxisSample& sample) {
  const SymmetricEigen eig = jacobi_eigensolve(scatter_matrix(sample).entries, sample.dim());
  return 2.0 * (1.0 - eig.values[0]);
}

/// Nonempty compact subset of R^q with an exact Euclidean projector.
class CompactSet {
 public:
  using Projector = std::function<Vec(const Vec&)>;

  static CompactSet unit_sphere(int q) { return CompactSet(Shape::sphere, q, 1.0, {}, {}, {}); }

  /// Closed canonical hemisphere {u in S_q : u_1 >= 0}.
  static CompactSet hemisphere(int q) { return CompactSet(Shape::hemisphere, q, 1.0, {}, {}, {}); }

  static CompactSet closed_ball(int q, double radius) {
    if (!(radius > 0.0)) fail(errc::bad_compact_set, "ball radius must be positive");
    return CompactSet(Shape::ball, q, radius, {}, {}, {});
  }

  static CompactSet axis_aligned_box(Vec lo, Vec hi) {
    if (lo.size() != hi.size() || lo.empty()) fail(errc::bad_compact_set, "box bounds sizes differ");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] <= hi[i])) fail(errc::bad_compact_set, "box has lo > hi");
    const int q = static_cast<int>(lo.size());
    return CompactSet(Shape::box, q, 0.0, std::move(lo), std::move(hi), {});
  }

  /// Caller-supplied projector; idempotence is verified at each query point.
  static CompactSet user_projection(int q, Projector project) {
    if (!project) fail(errc::bad_compact_set, "null projector");
    return CompactSet(Shape::user, q, 0.0, {}, {}, std::move(project));
  }

  int dim() const noexcept { return q_; }

  /// Euclidean projection of z onto the set.
  Vec project(const Vec& z) const {
    if (static_cast<int>(z.size()) != q_) fail(errc::dimension_mismatch, "point dimension mismatch");
    switch (shape_) {
      case Shape::sphere:
        return detail::unit_of(z, errc::non_unique_projection,
                               "projection of the origin onto the sphere is not unique");
      case Shape::hemisphere: {
        if (z[0] >= 0.0)
          return detail::unit_of(z, errc::non_unique_projection,
                                 "projection of the origin onto the hemisphere is not unique");
        Vec rim(z);
        rim[0] = 0.0;
        return detail::unit_of(rim, errc::non_unique_projection,
                               "projection onto the hemisphere rim is not unique");
      }
      case Shape::ball: {
        const double nm = norm(z);
        if (nm <= radius_) return z;
        Vec p(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) p[i] = z[i] * (radius_ / nm);
        return p;
      }
      case Shape::box: {
        Vec p(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) p[i] = std::clamp(z[i], lo_[i], hi_[i]);
        return p;
      }
      case Shape::user: {
        Vec p1 = project_(z);
        if (static_cast<int>(p1.size()) != q_)
          fail(errc::bad_projector, "projector changed the dimension");
        Vec p2 = project_(p1);
        if (norm(subtract(p1, p2)) > 1e-9)
          fail(errc::bad_projector, "projector is not idempotent at the queried point");
        return p1;
      }
    }
    fail(errc::bad_compact_set, "unknown shape");
  }

 private:
  enum class Shape { sphere, hemisphere, ball, box, user };

  CompactSet(Shape shape, int q, double radius, Vec lo, Vec hi, Projector project)
      : shape_(shape), q_(q), radius_(radius), lo_(std::move(lo)), hi_(std::move(hi)),
        project_(std::move(project)) {
    if (q_ < 1) fail(errc::bad_compact_set, "dimension must be positive");
  }

  Shape shape_;
  int q_;
  double radius_;
  Vec lo_;
  Vec hi_;
  Projector project_;
};

/// argmin_{mu in K} |m_hat - mu|^2: the projection of the plain mean onto K.
/// For K = unit sphere this reproduces mean_direction bit for bit.
inline Vec constrained_mean(const std::vector<Vec>& points, const CompactSet& K) {
  if (points.empty()) fail(errc::bad_dimension, "empty point cloud");
  return K.project(detail::mean_point(points));
}

inline Vec constrained_mean(const DirectionSample& sample, const CompactSet& K) {
  std::vector<Vec> pts;
  pts.reserve(sample.size());
  for (const Direction& d : sample) pts.push_back(d.coords());
  return constrained_mean(pts, K);
}

/// delta_hat on K = sigma_hat^2 + |m_hat - mu_hat(K)|^2, the attained minimum
/// of the empirical mean squared distance over K.
inline double constrained_dispersion(const std::vector<Vec>& points, const CompactSet& K) {
  if (points.empty()) fail(errc::bad_dimension, "empty point cloud");
  const Vec m = detail::mean_point(points);
  const Vec mu = K.project(m);
  double sigma2 = 0.0;
  for (const Vec& p : points) {
    double d2 = 0.0;
    for (std::size_t c = 0; c < m.size(); ++c) {
      const double d = p[c] - m[c];
      d2 += d * d;
    }
    sigma2 += d2;
  }
  sigma2 /= static_cast<double>(points.size());
  double off2 = 0.0;
  for (std::size_t c = 0; c < m.size(); ++c) {
    const double d = m[c] - mu[c];
    off2 += d * d;
  }
  return sigma2 + off2;
}

inline double constrained_dispersion(const DirectionSample& sample, const CompactSet& K) {
  std::vector<Vec> pts;
  pts.reserve(sample.size());
  for (const Direction& d : sample) pts.push_back(d.coords());
  return constrained_dispersion(pts, K);
}

}  // namespace sphstat
