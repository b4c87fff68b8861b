#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "sphstat/error.hpp"
#include "sphstat/geometry.hpp"
#include "sphstat/rng.hpp"
#include "sphstat/samples.hpp"
#include "sphstat/sampling.hpp"

namespace sphstat {

/// Closed half-space {z : s'z <= t}.
struct HalfSpace {
  Direction s;
  double t = 0.0;
};

/// The random directions over which the half-space sup is approximated.
/// Drawn once per confidence-set construction and shared by every replicate.
struct DirectionPool {
  std::vector<Direction> directions;
  SeedSpec seed;

  std::size_t size() const noexcept { return directions.size(); }
};

inline std::size_t default_pool_size(std::size_t n) {
  return std::max<std::size_t>(1000, 10 * n);
}

inline DirectionPool draw_direction_pool(int q, std::size_t k, SeedSpec seed) {
  if (k < 1) fail(errc::bad_dimension, "pool must contain at least one direction");
  DirectionPool pool;
  pool.seed = seed;
  pool.directions = sample_uniform_sphere(q, k, seed).points();
  return pool;
}

namespace detail {

/// Exact sup over t of |F_a(t) - F_b(t)| for the right-continuous empirical
/// cdfs of two sorted projection arrays. Both the value at each pooled jump
/// and the left limit are evaluated; counts stay integral until one final
/// division, so equal inputs give equal bits on every evaluation path.
inline double ks_from_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const long long nn = static_cast<long long>(n);
  const long long mm = static_cast<long long>(m);
  std::size_t i = 0;
  std::size_t j = 0;
  long long best = 0;
  while (i < n || j < m) {
    double v;
    if (i < n && j < m) v = std::min(a[i], b[j]);
    else if (i < n) v = a[i];
    else v = b[j];
    best = std::max(best, std::llabs(static_cast<long long>(i) * mm - static_cast<long long>(j) * nn));
    while (i < n && a[i] == v) ++i;
    while (j < m && b[j] == v) ++j;
    best = std::max(best, std::llabs(static_cast<long long>(i) * mm - static_cast<long long>(j) * nn));
  }
  return static_cast<double>(best) / (static_cast<double>(n) * static_cast<double>(m));
}

inline std::vector<double> project_onto(const DirectionSample& sample, const Direction& s) {
  std::vector<double> proj(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) proj[i] = dot(sample[i].coords(), s.coords());
  return proj;
}

}  // namespace detail

/// sup over thresholds t of |P_a(s'z <= t) - P_b(s'z <= t)|, computed exactly
/// at the pooled projection values.
inline double projected_ks(const DirectionSample& a, const DirectionSample& b, const Direction& s) {
  if (a.dim() != s.dim() || b.dim() != s.dim())
    fail(errc::dimension_mismatch, "samples and direction disagree on q");
  std::vector<double> pa = detail::project_onto(a, s);
  std::vector<double> pb = detail::project_onto(b, s);
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  return detail::ks_from_sorted(pa, pb);
}

/// h_n: maximum of the projected sup over the pool directions. Nondecreasing
/// under pool extension and bounded by the full half-space metric.
inline double halfspace_distance(const DirectionSample& a, const DirectionSample& b,
                                 const DirectionPool& pool) {
  if (pool.size() == 0) fail(errc::bad_dimension, "empty direction pool");
  double best = 0.0;
  for (const Direction& s : pool.directions) best = std::max(best, projected_ks(a, b, s));
  return best;
}

/// P0(s'z <= t) for a candidate distribution, right-continuous in t. The
/// one-sample evaluation below is exact when each projected cdf is continuous
/// at the data projections; distributions with atoms there should be passed
/// as reference samples instead.
using CapProbability = std::function<double(const Direction& s, double t)>;

inline double projected_ks(const DirectionSample& a, const CapProbability& cdf, const Direction& s) {
  if (a.dim() != s.dim()) fail(errc::dimension_mismatch, "sample and direction disagree on q");
  std::vector<double> pa = detail::project_onto(a, s);
  std::sort(pa.begin(), pa.end());
  const double n = static_cast<double>(pa.size());
  double best = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double f = cdf(s, pa[i]);
    best = std::max(best, std::abs(static_cast<double>(i + 1) / n - f));
    best = std::max(best, std::abs(static_cast<double>(i) / n - f));
  }
  return best;
}

inline double halfspace_distance(const DirectionSample& a, const CapProbability& cdf,
                                 const DirectionPool& pool) {
  if (pool.size() == 0) fail(errc::bad_dimension, "empty direction pool");
  double best = 0.0;
  for (const Direction& s : pool.directions) best = std::max(best, projected_ks(a, cdf, s));
  return best;
}

/// Precomputed projections of one fixed base sample onto every pool direction,
/// with tie groups. A bootstrap replicate is then a multiplicity table over
/// base indices, and h_n(resample, base) needs one O(n) walk per direction --
/// identical bits to sorting the materialized resample, since the walk visits
/// the same projection multiset in the same order.
class ProjectedBaseTable {
 public:
  ProjectedBaseTable(const DirectionSample& base, const DirectionPool& pool)
      : n_(base.size()), k_(pool.size()) {
    if (k_ == 0) fail(errc::bad_dimension, "empty direction pool");
    if (base.dim() != pool.directions.front().dim())
      fail(errc::dimension_mismatch, "pool and sample disagree on q");
    perm_.resize(k_ * n_);
    group_end_.resize(k_ * n_);
    std::vector<double> proj(n_);
    std::vector<std::uint32_t> order(n_);
    for (std::size_t d = 0; d < k_; ++d) {
      const Direction& s = pool.directions[d];
      for (std::size_t i = 0; i < n_; ++i) proj[i] = dot(base[i].coords(), s.coords());
      std::iota(order.begin(), order.end(), 0u);
      std::sort(order.begin(), order.end(),
                [&proj](std::uint32_t x, std::uint32_t y) { return proj[x] < proj[y]; });
      for (std::size_t pos = 0; pos < n_; ++pos) {
        perm_[d * n_ + pos] = order[pos];
        group_end_[d * n_ + pos] =
            pos + 1 == n_ || proj[order[pos]] != proj[order[pos + 1]];
      }
    }
  }

  std::size_t sample_size() const noexcept { return n_; }
  std::size_t pool_size() const noexcept { return k_; }

  /// h_n between the resample described by `counts` and the base sample.
  double max_ks(const std::vector<std::uint32_t>& counts) const {
    if (counts.size() != n_) fail(errc::dimension_mismatch, "counts size mismatch");
    long long best = 0;
    for (std::size_t d = 0; d < k_; ++d) {
      long long resampled = 0;
      long long base = 0;
      const std::size_t off = d * n_;
      for (std::size_t pos = 0; pos < n_; ++pos) {
        resampled += counts[perm_[off + pos]];
        ++base;
        if (group_end_[off + pos]) best = std::max(best, std::llabs(resampled - base));
      }
    }
    return static_cast<double>(best) / static_cast<double>(n_);
  }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::uint32_t> perm_;
  std::vector<char> group_end_;
};

}  // namespace sphstat
