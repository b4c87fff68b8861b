#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "sphstat/error.hpp"
#include "sphstat/estimators.hpp"
#include "sphstat/geometry.hpp"
#include "sphstat/samples.hpp"

namespace sphstat {

/// Smoothed directions for a time-ordered sample; positions whose smoothed
/// vector had no direction (norm <= tau0) carry no fitted value.
struct TrendResult {
  std::vector<std::optional<Direction>> fitted;  // length n
  std::vector<std::size_t> masked;               // indices with no fitted value

  std::size_t size() const noexcept { return fitted.size(); }
};

namespace detail {

/// Shared smoother kernel: rows of W X normalized to unit length. Both public
/// trend estimators funnel through here, which is what makes the running-mean
/// equivalence with the explicit weight matrix hold bit for bit.
inline TrendResult smooth_rows(const DirectionSample& sample, const Vec& weights) {
  const std::size_t n = sample.size();
  const std::size_t q = static_cast<std::size_t>(sample.dim());
  TrendResult result;
  result.fitted.resize(n);
  Vec row(q);
  for (std::size_t i = 0; i < n; ++i) {
    row.assign(q, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights[i * n + j];
      const Vec& p = sample[j].coords();
      for (std::size_t c = 0; c < q; ++c) row[c] += w * p[c];
    }
    const double nm = norm(row);
    if (nm <= kMeanDirectionTol) {
      result.fitted[i] = std::nullopt;
      result.masked.push_back(i);
    } else {
      Vec u(q);
      for (std::size_t c = 0; c < q; ++c) u[c] = row[c] / nm;
      result.fitted[i] = Direction(std::move(u));
    }
  }
  return result;
}

}  // namespace detail

/// Row-normalized moving-average weights with boundary-truncated windows.
/// Asymmetric at the ends whenever window > 1 (interior rows average `window`
/// neighbors, boundary rows fewer).
inline Vec running_mean_weights(std::size_t n, std::size_t window) {
  if (window < 1 || window % 2 == 0 || window > n)
    fail(errc::bad_window, "window must be odd, positive and at most n");
  const std::size_t h = window / 2;
  Vec w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= h ? i - h : 0;
    const std::size_t hi = std::min(n - 1, i + h);
    const double weight = 1.0 / static_cast<double>(hi - lo + 1);
    for (std::size_t j = lo; j <= hi; ++j) w[i * n + j] = weight;
  }
  return w;
}

/// Centered running average of the time-ordered directions, truncated at the
/// boundaries, each average normalized back to the sphere.
inline TrendResult running_mean_trend(const DirectionSample& sample, std::size_t window) {
  return detail::smooth_rows(sample, running_mean_weights(sample.size(), window));
}

/// Rows of W X normalized to unit length. W must be symmetric within 1e-10
/// unless enforce_symmetry is disabled (the running-mean matrix is truncated
/// and hence asymmetric at the boundaries; it goes through the same kernel).
inline TrendResult linear_smoother_trend(const DirectionSample& sample, const Vec& weights,
                                         bool enforce_symmetry = true) {
  const std::size_t n = sample.size();
  if (weights.size() != n * n) fail(errc::dimension_mismatch, "weight matrix is not n x n");
  if (enforce_symmetry) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (std::abs(weights[i * n + j] - weights[j * n + i]) > 1e-10)
          fail(errc::not_symmetric, "weight matrix is not symmetric");
  }
  return detail::smooth_rows(sample, weights);
}

}  // namespace sphstat
