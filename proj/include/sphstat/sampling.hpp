#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sphstat/error.hpp"
#include "sphstat/geometry.hpp"
#include "sphstat/rng.hpp"
#include "sphstat/samples.hpp"

namespace sphstat {

namespace detail {

inline Vec gaussian_vector(Rng& rng, int q) {
  Vec g(static_cast<std::size_t>(q));
  for (double& x : g) x = rng.next_gauss();
  return g;
}

inline Direction gaussian_direction(Rng& rng, int q) {
  for (;;) {
    Vec g = gaussian_vector(rng, q);
    if (norm(g) > kZeroVectorTol) return normalize(g);
  }
}

/// Marsaglia-Tsang gamma sampler (unit scale), with the shape<1 boost.
inline double gamma_draw(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double g = gamma_draw(rng, shape + 1.0);
    const double u = rng.next_unit_open();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.next_gauss();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_unit_open();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

inline double beta_draw(Rng& rng, double a, double b) {
  const double x = gamma_draw(rng, a);
  const double y = gamma_draw(rng, b);
  return x / (x + y);
}

/// One von Mises-Fisher draw via the Ulrich-Wood rejection scheme: sample the
/// cosine W of the angle to mu, then a uniform tangent in mu's complement.
inline Direction vmf_direction(Rng& rng, const Direction& mu, double kappa) {
  const int q = mu.dim();
  const double d = static_cast<double>(q - 1);
  const double b = d / (std::sqrt(4.0 * kappa * kappa + d * d) + 2.0 * kappa);
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + d * std::log(1.0 - x0 * x0);
  double w = 0.0;
  for (;;) {
    const double z = beta_draw(rng, d / 2.0, d / 2.0);
    const double u = rng.next_unit_open();
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    if (kappa * w + d * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }
  // Uniform tangent: Gaussian in R^q projected onto mu's orthogonal complement.
  Vec t;
  for (;;) {
    t = gaussian_vector(rng, q);
    const double along = dot(t, mu.coords());
    for (int i = 0; i < q; ++i) t[static_cast<std::size_t>(i)] -= along * mu[static_cast<std::size_t>(i)];
    if (norm(t) > kZeroVectorTol) break;
  }
  const double tn = norm(t);
  const double sin_w = std::sqrt(std::max(0.0, 1.0 - w * w));
  Vec out(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i)
    out[static_cast<std::size_t>(i)] =
        w * mu[static_cast<std::size_t>(i)] + sin_w * t[static_cast<std::size_t>(i)] / tn;
  return normalize(out);
}

}  // namespace detail

/// n i.i.d. draws uniform on S_q (normalized standard Gaussians). Output is a
/// pure function of (q, n, seed).
inline DirectionSample sample_uniform_sphere(int q, std::size_t n, SeedSpec seed) {
  if (q < 2) fail(errc::bad_dimension, "sphere dimension must satisfy q >= 2");
  if (n < 1) fail(errc::bad_dimension, "sample size must be at least 1");
  Rng rng(seed);
  std::vector<Direction> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(detail::gaussian_direction(rng, q));
  return DirectionSample(std::move(pts));
}

/// n i.i.d. von Mises-Fisher(mu, kappa) draws; kappa = 0 falls back to the
/// uniform sampler (same stream, bit-identical to sample_uniform_sphere).
inline DirectionSample sample_vmf(const Direction& mu, double kappa, std::size_t n, SeedSpec seed) {
  if (kappa < 0.0) fail(errc::bad_dimension, "kappa must be nonnegative");
  if (n < 1) fail(errc::bad_dimension, "sample size must be at least 1");
  if (kappa == 0.0) return sample_uniform_sphere(mu.dim(), n, seed);
  Rng rng(seed);
  std::vector<Direction> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(detail::vmf_direction(rng, mu, kappa));
  return DirectionSample(std::move(pts));
}

/// The n with-replacement index draws behind one bootstrap replicate.
inline std::vector<std::uint32_t> resample_indices(std::size_t n, SeedSpec seed) {
  Rng rng(seed);
  std::vector<std::uint32_t> idx(n);
  for (std::size_t i = 0; i < n; ++i)
    idx[i] = static_cast<std::uint32_t>(rng.next_below(static_cast<std::uint64_t>(n)));
  return idx;
}

/// Multiplicity table of the same index stream (consumes the identical draws).
inline std::vector<std::uint32_t> resample_counts(std::size_t n, SeedSpec seed) {
  std::vector<std::uint32_t> counts(n, 0);
  for (std::uint32_t i : resample_indices(n, seed)) ++counts[i];
  return counts;
}

/// n i.i.d. draws with replacement from the sample (the bootstrap world).
inline DirectionSample resample(const DirectionSample& sample, SeedSpec seed) {
  const auto idx = resample_indices(sample.size(), seed);
  std::vector<Direction> pts;
  pts.reserve(idx.size());
  for (std::uint32_t i : idx) pts.push_back(sample[i]);
  return DirectionSample(std::move(pts));
}

inline AxisSample resample(const AxisSample& sample, SeedSpec seed) {
  const auto idx = resample_indices(sample.size(), seed);
  std::vector<Axis> axes;
  axes.reserve(idx.size());
  for (std::uint32_t i : idx) axes.push_back(sample[i]);
  return AxisSample(std::move(axes));
}

namespace detail {

/// Moments E[t^p] of the cosine t = x'mu under vMF(mu, kappa) on S_q, by
/// Simpson quadrature of the tangent density e^{kappa cos phi} sin^{q-2} phi.
/// The domain is truncated where the exponential underflows, which keeps the
/// grid dense across the mass even for large kappa.
inline double vmf_cosine_moment(int q, double kappa, int power) {
  if (q < 2) fail(errc::bad_dimension, "q >= 2 required");
  if (kappa < 0.0) fail(errc::bad_dimension, "kappa must be nonnegative");
  const double reach = kappa > 0.0 ? std::min(2.0, 745.0 / kappa) : 2.0;
  const double phi_max = std::acos(1.0 - reach);
  const int segments = 4096;  // Simpson pairs
  const double h = phi_max / (2.0 * segments);
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i <= 2 * segments; ++i) {
    const double phi = h * i;
    const double t = std::cos(phi);
    double w = std::exp(kappa * (t - 1.0));
    if (q > 2) w *= std::pow(std::sin(phi), q - 2);
    const double simpson = (i == 0 || i == 2 * segments) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    den += simpson * w;
    num += simpson * w * std::pow(t, power);
  }
  return num / den;
}

}  // namespace detail

/// |m(P)| for vMF(mu, kappa) on S_q, i.e. E[x'mu]; 0 for kappa = 0.
inline double vmf_resultant_length(int q, double kappa) {
  if (kappa == 0.0) return 0.0;
  return detail::vmf_cosine_moment(q, kappa, 1);
}

/// E[(x'mu)^2] for vMF(mu, kappa) on S_q; equals the top eigenvalue of the
/// axialized scatter matrix E[xx'] (1/q at kappa = 0).
inline double vmf_second_tangent_moment(int q, double kappa) {
  if (kappa == 0.0) return 1.0 / static_cast<double>(q);
  return detail::vmf_cosine_moment(q, kappa, 2);
}

}  // namespace sphstat
