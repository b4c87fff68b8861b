#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "sphstat/error.hpp"
#include "sphstat/estimators.hpp"
#include "sphstat/geometry.hpp"
#include "sphstat/halfspace.hpp"
#include "sphstat/parallel.hpp"
#include "sphstat/rng.hpp"
#include "sphstat/samples.hpp"
#include "sphstat/sampling.hpp"

namespace sphstat {

enum class RootTag { mean_direction, dispersion, distribution, mean_axis, axial_dispersion };

inline const char* root_tag_name(RootTag t) {
  switch (t) {
    case RootTag::mean_direction: return "mean-direction";
    case RootTag::dispersion: return "dispersion";
    case RootTag::distribution: return "distribution";
    case RootTag::mean_axis: return "mean-axis";
    case RootTag::axial_dispersion: return "axial-dispersion";
  }
  return "?";
}

// Root values as single expressions, shared by evaluation, membership tests
// and the bootstrap loops so all agree bit for bit.

/// n |mu_hat - mu|^2 = 2n (1 - mu_hat' mu)
inline double mean_direction_root(std::size_t n, const Direction& estimate, const Direction& target) {
  if (estimate.dim() != target.dim()) fail(errc::dimension_mismatch, "target dimension mismatch");
  return 2.0 * static_cast<double>(n) * (1.0 - dot(estimate.coords(), target.coords()));
}

/// sqrt(n) |theta_hat - theta| (directional and axial dispersion both).
inline double dispersion_root(std::size_t n, double estimate, double target) {
  return std::sqrt(static_cast<double>(n)) * std::abs(estimate - target);
}

/// n ||e e' - f f'||^2 = 2n (1 - (e'f)^2); sign-invariant in both arguments.
inline double mean_axis_root(std::size_t n, const Direction& estimate, const Direction& target) {
  if (estimate.dim() != target.dim()) fail(errc::dimension_mismatch, "target dimension mismatch");
  const double ip = dot(estimate.coords(), target.coords());
  return 2.0 * static_cast<double>(n) * (1.0 - ip * ip);
}

/// Hypothesized-target descriptors for the five root families.
struct MeanDirectionRoot {
  Direction target;
};
struct DispersionRoot {
  double target = 0.0;
};
struct DistributionRoot {
  const DirectionSample* reference = nullptr;  // candidate P0 as a sample, or
  CapProbability oracle;                       // an exact cap-probability cdf
  const DirectionPool* pool = nullptr;         // shared pool (required)
};
struct MeanAxisRoot {
  Axis target;
};
struct AxialDispersionRoot {
  double target = 0.0;
};

using RootKind =
    std::variant<MeanDirectionRoot, DispersionRoot, DistributionRoot, MeanAxisRoot, AxialDispersionRoot>;

inline double evaluate_root(const RootKind& kind, const DirectionSample& sample) {
  const std::size_t n = sample.size();
  if (const auto* k = std::get_if<MeanDirectionRoot>(&kind))
    return mean_direction_root(n, mean_direction(sample), k->target);
  if (const auto* k = std::get_if<DispersionRoot>(&kind))
    return dispersion_root(n, directional_dispersion(sample), k->target);
  if (const auto* k = std::get_if<DistributionRoot>(&kind)) {
    if (k->pool == nullptr) fail(errc::bad_dimension, "distribution root needs a direction pool");
    const double h = k->reference != nullptr
                         ? halfspace_distance(sample, *k->reference, *k->pool)
                         : (k->oracle ? halfspace_distance(sample, k->oracle, *k->pool)
                                      : (fail(errc::bad_dimension,
                                              "distribution root needs a reference sample or oracle"),
                                         0.0));
    return std::sqrt(static_cast<double>(n)) * h;
  }
  fail(errc::kind_mismatch, "axial root evaluated on a direction sample");
}

inline double evaluate_root(const RootKind& kind, const AxisSample& sample) {
  const std::size_t n = sample.size();
  if (const auto* k = std::get_if<MeanAxisRoot>(&kind))
    return mean_axis_root(n, mean_axis(sample).axis.rep(), k->target.rep());
  if (const auto* k = std::get_if<AxialDispersionRoot>(&kind))
    return dispersion_root(n, axial_dispersion(sample), k->target);
  if (std::get_if<DistributionRoot>(&kind) != nullptr)
    return evaluate_root(kind, hemisphere_representation(sample));
  fail(errc::kind_mismatch, "directional root evaluated on an axis sample");
}

/// Sorted bootstrap replicate values of one root family.
struct BootstrapDistribution {
  std::vector<double> root_values;  // ascending, length B
  std::size_t B = 0;
  std::uint64_t seed = 0;
  RootTag kind = RootTag::mean_direction;
  std::size_t degenerate_count = 0;  // replicates with undefined estimator, assigned the max root
};

struct BootstrapOptions {
  unsigned threads = 0;                 // 0 -> hardware concurrency
  std::uint64_t run_tag = 0;            // namespaces replicate streams (e.g. simulation trial)
  const DirectionPool* pool = nullptr;  // distribution roots: shared pool
  std::size_t pool_size = 0;            // 0 -> default_pool_size(n)
};

namespace detail {

inline void fill_resample_indices(std::vector<std::uint32_t>& idx, std::size_t n, SeedSpec seed) {
  Rng rng(seed);
  idx.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    idx[i] = static_cast<std::uint32_t>(rng.next_below(static_cast<std::uint64_t>(n)));
}

/// Resampled coordinatewise mean, accumulated in draw order (the same order
/// and expressions resultant_mean uses on the materialized resample).
inline void resampled_mean(const DirectionSample& sample, const std::vector<std::uint32_t>& idx,
                           Vec& m) {
  m.assign(static_cast<std::size_t>(sample.dim()), 0.0);
  for (std::uint32_t i : idx) {
    const Vec& p = sample[i].coords();
    for (std::size_t c = 0; c < m.size(); ++c) m[c] += p[c];
  }
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (double& x : m) x *= inv;
}

inline void resampled_scatter(const AxisSample& sample, const std::vector<std::uint32_t>& idx,
                              Vec& m) {
  const std::size_t qu = static_cast<std::size_t>(sample.dim());
  m.assign(qu * qu, 0.0);
  for (std::uint32_t k : idx) {
    const Vec& x = sample[k].rep().coords();
    for (std::size_t i = 0; i < qu; ++i)
      for (std::size_t j = i; j < qu; ++j) m[i * qu + j] += x[i] * x[j];
  }
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (std::size_t i = 0; i < qu; ++i)
    for (std::size_t j = i; j < qu; ++j) {
      m[i * qu + j] *= inv;
      m[j * qu + i] = m[i * qu + j];
    }
}

inline BootstrapDistribution sorted_distribution(std::vector<double> roots,
                                                 const std::vector<char>& degenerate,
                                                 std::uint64_t seed, RootTag tag) {
  BootstrapDistribution dist;
  dist.B = roots.size();
  dist.seed = seed;
  dist.kind = tag;
  dist.degenerate_count = 0;
  for (char f : degenerate) dist.degenerate_count += static_cast<std::size_t>(f);
  std::sort(roots.begin(), roots.end());
  dist.root_values = std::move(roots);
  return dist;
}

}  // namespace detail

/// Monte Carlo draws of R_n(X*, T(P_hat)) in the bootstrap world: the target
/// is the plug-in value from the original sample, each replicate resamples n
/// points with its own (master seed, run tag, replicate) stream, and the
/// values come back sorted. Results are bit-identical for any thread count.
/// Replicates whose estimator is undefined get the root's maximal value
/// (4n for mean-direction, 2n for mean-axis) and are counted.
inline BootstrapDistribution bootstrap_distribution(const DirectionSample& sample, RootTag tag,
                                                    std::size_t B, std::uint64_t seed,
                                                    const BootstrapOptions& opts = {}) {
  if (B < 1) fail(errc::bad_dimension, "B must be at least 1");
  const std::size_t n = sample.size();
  std::vector<double> roots(B, 0.0);
  std::vector<char> degenerate(B, 0);

  if (tag == RootTag::mean_direction) {
    const Direction target = mean_direction(sample);  // may throw, original sample only
    parallel_chunks(0, B, opts.threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<std::uint32_t> idx;
      Vec m;
      for (std::size_t b = lo; b < hi; ++b) {
        detail::fill_resample_indices(idx, n,
                                      SeedSpec{seed, substream(stream_domain::replicate, opts.run_tag, b)});
        detail::resampled_mean(sample, idx, m);
        const double nm = norm(m);
        if (nm <= kMeanDirectionTol) {
          degenerate[b] = 1;
          roots[b] = 4.0 * static_cast<double>(n);
        } else {
          Vec u(m.size());
          for (std::size_t c = 0; c < m.size(); ++c) u[c] = m[c] / nm;
          roots[b] = mean_direction_root(n, Direction(std::move(u)), target);
        }
      }
    });
  } else if (tag == RootTag::dispersion) {
    const double target = directional_dispersion(sample);
    parallel_chunks(0, B, opts.threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<std::uint32_t> idx;
      Vec m;
      for (std::size_t b = lo; b < hi; ++b) {
        detail::fill_resample_indices(idx, n,
                                      SeedSpec{seed, substream(stream_domain::replicate, opts.run_tag, b)});
        detail::resampled_mean(sample, idx, m);
        roots[b] = dispersion_root(n, 2.0 * (1.0 - norm(m)), target);
      }
    });
  } else if (tag == RootTag::distribution) {
    std::optional<DirectionPool> own_pool;
    const DirectionPool* pool = opts.pool;
    if (pool == nullptr) {
      const std::size_t k = opts.pool_size != 0 ? opts.pool_size : default_pool_size(n);
      own_pool = draw_direction_pool(sample.dim(), k,
                                     SeedSpec{seed, substream(stream_domain::pool, opts.run_tag, 0)});
      pool = &*own_pool;
    }
    const ProjectedBaseTable table(sample, *pool);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    parallel_chunks(0, B, opts.threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<std::uint32_t> idx;
      std::vector<std::uint32_t> counts(n);
      for (std::size_t b = lo; b < hi; ++b) {
        detail::fill_resample_indices(idx, n,
                                      SeedSpec{seed, substream(stream_domain::replicate, opts.run_tag, b)});
        std::fill(counts.begin(), counts.end(), 0u);
        for (std::uint32_t i : idx) ++counts[i];
        roots[b] = sqrt_n * table.max_ks(counts);
      }
    });
  } else {
    fail(errc::kind_mismatch, "axial root tag on a direction sample");
  }
  return detail::sorted_distribution(std::move(roots), degenerate, seed, tag);
}

inline BootstrapDistribution bootstrap_distribution(const AxisSample& sample, RootTag tag,
                                                    std::size_t B, std::uint64_t seed,
                                                    const BootstrapOptions& opts = {}) {
  if (B < 1) fail(errc::bad_dimension, "B must be at least 1");
  const std::size_t n = sample.size();
  const int q = sample.dim();
  std::vector<double> roots(B, 0.0);
  std::vector<char> degenerate(B, 0);

  if (tag == RootTag::mean_axis) {
    const Axis target = mean_axis(sample).axis;  // may throw, original sample only
    parallel_chunks(0, B, opts.threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<std::uint32_t> idx;
      Vec m;
      for (std::size_t b = lo; b < hi; ++b) {
        detail::fill_resample_indices(idx, n,
                                      SeedSpec{seed, substream(stream_domain::replicate, opts.run_tag, b)});
        detail::resampled_scatter(sample, idx, m);
        const SymmetricEigen eig = jacobi_eigensolve(m, q);
        if (eig.values[0] - eig.values[1] < kEigenGapTol) {
          degenerate[b] = 1;
          roots[b] = 2.0 * static_cast<double>(n);
        } else {
          roots[b] = mean_axis_root(n, Direction(eig.vectors[0]), target.rep());
        }
      }
    });
  } else if (tag == RootTag::axial_dispersion) {
    const double target = axial_dispersion(sample);
    parallel_chunks(0, B, opts.threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<std::uint32_t> idx;
      Vec m;
      for (std::size_t b = lo; b < hi; ++b) {
        detail::fill_resample_indices(idx, n,
                                      SeedSpec{seed, substream(stream_domain::replicate, opts.run_tag, b)});
        detail::resampled_scatter(sample, idx, m);
        const SymmetricEigen eig = jacobi_eigensolve(m, q);
        roots[b] = dispersion_root(n, 2.0 * (1.0 - eig.values[0]), target);
      }
    });
  } else if (tag == RootTag::distribution) {
    return bootstrap_distribution(hemisphere_representation(sample), tag, B, seed, opts);
  } else {
    fail(errc::kind_mismatch, "directional root tag on an axis sample");
  }
  return detail::sorted_distribution(std::move(roots), degenerate, seed, tag);
}

/// Largest beta-th quantile: the 1-based order statistic at ceil(beta * B).
inline double critical_value(const BootstrapDistribution& dist, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) fail(errc::bad_level, "beta must lie in (0, 1)");
  if (dist.root_values.empty()) fail(errc::bad_dimension, "empty bootstrap distribution");
  const double raw = beta * static_cast<double>(dist.B);
  auto idx = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  idx = std::clamp<std::size_t>(idx, 1, dist.B);
  return dist.root_values[idx - 1];
}

inline double cone_half_angle(double critical, std::size_t n) {
  return std::acos(std::clamp(1.0 - critical / (2.0 * static_cast<double>(n)), -1.0, 1.0));
}

inline double double_cone_half_angle(double critical, std::size_t n) {
  return std::acos(std::sqrt(std::clamp(1.0 - critical / (2.0 * static_cast<double>(n)), 0.0, 1.0)));
}

struct Cone {
  Direction apex;
  double half_angle = 0.0;  // radians
};
struct DoubleCone {
  Axis axis;
  double half_angle = 0.0;
};
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double estimate = 0.0;
  double range_max = 2.0;  // natural parameter range [0, range_max]
};
struct DistributionBand {
  double critical = 0.0;
  double band_halfwidth = 0.0;  // critical / sqrt(n)
};

struct ConfidenceSummary {
  std::variant<Cone, DoubleCone, Interval, DistributionBand> geometry;
  double beta = 0.0;
  std::size_t B = 0;
  std::uint64_t seed = 0;
  double critical = 0.0;
  std::size_t n = 0;
  std::size_t degenerate_count = 0;
};

/// More than 1% degenerate replicates deserves a caller-visible warning.
inline bool degenerate_warning(const ConfidenceSummary& s) {
  return static_cast<double>(s.degenerate_count) > 0.01 * static_cast<double>(s.B);
}

// Membership tests are root-vs-critical comparisons, so they agree exactly
// with the bootstrap construction; the geometry fields restate them.

inline bool contains(const ConfidenceSummary& s, const Direction& mu) {
  const auto& cone = std::get<Cone>(s.geometry);
  return mean_direction_root(s.n, cone.apex, mu) <= s.critical;
}

inline bool contains(const ConfidenceSummary& s, const Axis& axis) {
  const auto& dc = std::get<DoubleCone>(s.geometry);
  return mean_axis_root(s.n, dc.axis.rep(), axis.rep()) <= s.critical;
}

inline bool contains_dispersion(const ConfidenceSummary& s, double theta) {
  const auto& iv = std::get<Interval>(s.geometry);
  if (theta < 0.0 || theta > iv.range_max) return false;
  return dispersion_root(s.n, iv.estimate, theta) <= s.critical;
}

/// Circular confidence cone about mu_hat (apex, bootstrap-calibrated half-angle).
inline ConfidenceSummary confidence_cone(const DirectionSample& sample, double beta, std::size_t B,
                                         std::uint64_t seed, const BootstrapOptions& opts = {}) {
  const BootstrapDistribution dist = bootstrap_distribution(sample, RootTag::mean_direction, B, seed, opts);
  const double c = critical_value(dist, beta);
  ConfidenceSummary s;
  s.geometry = Cone{mean_direction(sample), cone_half_angle(c, sample.size())};
  s.beta = beta;
  s.B = B;
  s.seed = seed;
  s.critical = c;
  s.n = sample.size();
  s.degenerate_count = dist.degenerate_count;
  return s;
}

/// Circular double cone about the estimated mean axis.
inline ConfidenceSummary confidence_double_cone(const AxisSample& sample, double beta, std::size_t B,
                                                std::uint64_t seed, const BootstrapOptions& opts = {}) {
  const BootstrapDistribution dist = bootstrap_distribution(sample, RootTag::mean_axis, B, seed, opts);
  const double c = critical_value(dist, beta);
  ConfidenceSummary s;
  s.geometry = DoubleCone{mean_axis(sample).axis, double_cone_half_angle(c, sample.size())};
  s.beta = beta;
  s.B = B;
  s.seed = seed;
  s.critical = c;
  s.n = sample.size();
  s.degenerate_count = dist.degenerate_count;
  return s;
}

/// Two-sided interval theta_hat +- c/sqrt(n), clipped to the parameter range.
inline ConfidenceSummary dispersion_interval(const DirectionSample& sample, double beta, std::size_t B,
                                             std::uint64_t seed, const BootstrapOptions& opts = {}) {
  const BootstrapDistribution dist = bootstrap_distribution(sample, RootTag::dispersion, B, seed, opts);
  const double c = critical_value(dist, beta);
  const double est = directional_dispersion(sample);
  const double half = c / std::sqrt(static_cast<double>(sample.size()));
  ConfidenceSummary s;
  s.geometry = Interval{std::max(0.0, est - half), std::min(2.0, est + half), est, 2.0};
  s.beta = beta;
  s.B = B;
  s.seed = seed;
  s.critical = c;
  s.n = sample.size();
  return s;
}

inline ConfidenceSummary dispersion_interval(const AxisSample& sample, double beta, std::size_t B,
                                             std::uint64_t seed, const BootstrapOptions& opts = {}) {
  const BootstrapDistribution dist = bootstrap_distribution(sample, RootTag::axial_dispersion, B, seed, opts);
  const double c = critical_value(dist, beta);
  const double est = axial_dispersion(sample);
  const double half = c / std::sqrt(static_cast<double>(sample.size()));
  const double range_max = 2.0 * (1.0 - 1.0 / static_cast<double>(sample.dim()));
  ConfidenceSummary s;
  s.geometry = Interval{std::max(0.0, est - half), std::min(range_max, est + half), est, range_max};
  s.beta = beta;
  s.B = B;
  s.seed = seed;
  s.critical = c;
  s.n = sample.size();
  return s;
}

/// Half-space confidence set for the distribution itself: simultaneous band
/// P(A) in [P_hat(A) - c/sqrt(n), P_hat(A) + c/sqrt(n)] over all half-spaces,
/// with a membership test against candidate distributions. The pool is drawn
/// once and shared by the observed statistic and every replicate.
struct DistributionConfidence {
  ConfidenceSummary summary;
  DirectionPool pool;
  DirectionSample base;

  double root_for(const DirectionSample& reference) const {
    return std::sqrt(static_cast<double>(base.size())) * halfspace_distance(base, reference, pool);
  }
  double root_for(const CapProbability& oracle) const {
    return std::sqrt(static_cast<double>(base.size())) * halfspace_distance(base, oracle, pool);
  }
  bool contains(const DirectionSample& reference) const { return root_for(reference) <= summary.critical; }
  bool contains(const CapProbability& oracle) const { return root_for(oracle) <= summary.critical; }
};

inline DistributionConfidence distribution_confidence(const DirectionSample& sample, double beta,
                                                      std::size_t B, std::uint64_t seed,
                                                      std::size_t pool_size = 0,
                                                      const BootstrapOptions& opts = {}) {
  const std::size_t k = pool_size != 0 ? pool_size : default_pool_size(sample.size());
  DirectionPool pool =
      opts.pool != nullptr
          ? *opts.pool
          : draw_direction_pool(sample.dim(), k,
                                SeedSpec{seed, substream(stream_domain::pool, opts.run_tag, 0)});
  BootstrapOptions inner = opts;
  inner.pool = &pool;
  const BootstrapDistribution dist = bootstrap_distribution(sample, RootTag::distribution, B, seed, inner);
  const double c = critical_value(dist, beta);
  ConfidenceSummary s;
  s.geometry = DistributionBand{c, c / std::sqrt(static_cast<double>(sample.size()))};
  s.beta = beta;
  s.B = B;
  s.seed = seed;
  s.critical = c;
  s.n = sample.size();
  return DistributionConfidence{std::move(s), std::move(pool), sample};
}

inline DistributionConfidence distribution_confidence(const AxisSample& sample, double beta,
                                                      std::size_t B, std::uint64_t seed,
                                                      std::size_t pool_size = 0,
                                                      const BootstrapOptions& opts = {}) {
  return distribution_confidence(hemisphere_representation(sample), beta, B, seed, pool_size, opts);
}

/// Synthetic data model for the coverage harness.
struct GeneratorSpec {
  enum class Kind { uniform, vmf } kind = Kind::vmf;
  int q = 3;
  Vec mu;              // vmf mean direction; empty -> e_1
  double kappa = 0.0;  // vmf concentration (0 = uniform)
};

enum class SetKind { cone, double_cone, dispersion_interval, axial_dispersion_interval };

inline const char* set_kind_name(SetKind k) {
  switch (k) {
    case SetKind::cone: return "cone";
    case SetKind::double_cone: return "axial-cone";
    case SetKind::dispersion_interval: return "interval";
    case SetKind::axial_dispersion_interval: return "axial-interval";
  }
  return "?";
}

struct CoverageReport {
  std::size_t trials = 0;
  std::size_t covered = 0;
  std::size_t errored = 0;  // per-trial estimator failures, counted as non-coverage
  double coverage = 0.0;
  double std_error = 0.0;
};

namespace detail {

inline Direction generator_mu(const GeneratorSpec& gen) {
  if (!gen.mu.empty()) return normalize(gen.mu);
  Vec e(static_cast<std::size_t>(gen.q), 0.0);
  e[0] = 1.0;
  return Direction(std::move(e));
}

inline DirectionSample generator_draw(const GeneratorSpec& gen, std::size_t n, SeedSpec seed) {
  if (gen.kind == GeneratorSpec::Kind::uniform || gen.kappa == 0.0)
    return sample_uniform_sphere(gen.q, n, seed);
  return sample_vmf(generator_mu(gen), gen.kappa, n, seed);
}

}  // namespace detail

/// Fraction of seeded trials whose confidence set captures the generator's
/// true functional. Trials run in parallel with per-trial substreams, so the
/// report is a pure function of the arguments.
inline CoverageReport coverage_simulation(const GeneratorSpec& gen, std::size_t n, double beta,
                                          std::size_t B, std::size_t trials, std::uint64_t seed,
                                          SetKind set_kind, unsigned threads = 0) {
  if (trials < 1) fail(errc::bad_dimension, "trials must be at least 1");
  if (!(beta > 0.0 && beta < 1.0)) fail(errc::bad_level, "beta must lie in (0, 1)");
  const bool needs_location = set_kind == SetKind::cone || set_kind == SetKind::double_cone;
  const bool vmf_like = gen.kind == GeneratorSpec::Kind::vmf && gen.kappa > 0.0;
  if (needs_location && !vmf_like)
    fail(errc::undefined_mean_direction, "uniform generator has no mean direction or axis");

  // Analytic truths.
  Direction mu_truth = detail::generator_mu(gen);
  const double kappa = vmf_like ? gen.kappa : 0.0;
  const double delta_truth = 2.0 * (1.0 - vmf_resultant_length(gen.q, kappa));
  const double gamma_truth = 2.0 * (1.0 - vmf_second_tangent_moment(gen.q, kappa));

  std::vector<char> covered(trials, 0);
  std::vector<char> errored(trials, 0);
  parallel_chunks(0, trials, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      try {
        const DirectionSample data =
            detail::generator_draw(gen, n, SeedSpec{seed, substream(stream_domain::data, t, 0)});
        BootstrapOptions opts;
        opts.threads = 1;
        opts.run_tag = t;
        switch (set_kind) {
          case SetKind::cone: {
            const BootstrapDistribution dist =
                bootstrap_distribution(data, RootTag::mean_direction, B, seed, opts);
            const double c = critical_value(dist, beta);
            covered[t] = mean_direction_root(n, mean_direction(data), mu_truth) <= c;
            break;
          }
          case SetKind::dispersion_interval: {
            const BootstrapDistribution dist =
                bootstrap_distribution(data, RootTag::dispersion, B, seed, opts);
            const double c = critical_value(dist, beta);
            covered[t] = dispersion_root(n, directional_dispersion(data), delta_truth) <= c;
            break;
          }
          case SetKind::double_cone: {
            const AxisSample axes = axialize(data);
            const BootstrapDistribution dist =
                bootstrap_distribution(axes, RootTag::mean_axis, B, seed, opts);
            const double c = critical_value(dist, beta);
            covered[t] = mean_axis_root(n, mean_axis(axes).axis.rep(), mu_truth) <= c;
            break;
          }
          case SetKind::axial_dispersion_interval: {
            const AxisSample axes = axialize(data);
            const BootstrapDistribution dist =
                bootstrap_distribution(axes, RootTag::axial_dispersion, B, seed, opts);
            const double c = critical_value(dist, beta);
            covered[t] = dispersion_root(n, axial_dispersion(axes), gamma_truth) <= c;
            break;
          }
        }
      } catch (const Error&) {
        errored[t] = 1;
      }
    }
  });

  CoverageReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    report.covered += static_cast<std::size_t>(covered[t]);
    report.errored += static_cast<std::size_t>(errored[t]);
  }
  report.coverage = static_cast<double>(report.covered) / static_cast<double>(trials);
  report.std_error =
      std::sqrt(report.coverage * (1.0 - report.coverage) / static_cast<double>(trials));
  return report;
}

namespace experimental {

/// Bootstrap ball for the K-constrained mean, built by analogy with the cone
/// root. The supporting asymptotics are not part of the validated theory, so
/// this stays out of the CLI surface.
struct ConstrainedMeanRegion {
  Vec center;
  double radius = 0.0;  // Euclidean, in R^q
  double critical = 0.0;
  double beta = 0.0;
  std::size_t B = 0;

  bool contains(const Vec& mu) const {
    double d2 = 0.0;
    for (std::size_t c = 0; c < center.size(); ++c) {
      const double d = mu[c] - center[c];
      d2 += d * d;
    }
    return std::sqrt(d2) <= radius;
  }
};

inline ConstrainedMeanRegion constrained_mean_region(const std::vector<Vec>& points,
                                                     const CompactSet& K, double beta, std::size_t B,
                                                     std::uint64_t seed,
                                                     const BootstrapOptions& opts = {}) {
  if (points.empty()) fail(errc::bad_dimension, "empty point cloud");
  if (B < 1) fail(errc::bad_dimension, "B must be at least 1");
  const std::size_t n = points.size();
  const Vec center = constrained_mean(points, K);
  std::vector<double> roots(B, 0.0);
  parallel_chunks(0, B, opts.threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> idx;
    std::vector<Vec> cloud(n);
    for (std::size_t b = lo; b < hi; ++b) {
      detail::fill_resample_indices(idx, n,
                                    SeedSpec{seed, substream(stream_domain::replicate, opts.run_tag, b)});
      for (std::size_t i = 0; i < n; ++i) cloud[i] = points[idx[i]];
      const Vec star = constrained_mean(cloud, K);
      double d2 = 0.0;
      for (std::size_t c = 0; c < star.size(); ++c) {
        const double d = star[c] - center[c];
        d2 += d * d;
      }
      roots[b] = static_cast<double>(n) * d2;
    }
  });
  std::sort(roots.begin(), roots.end());
  BootstrapDistribution dist;
  dist.root_values = std::move(roots);
  dist.B = B;
  dist.seed = seed;
  const double c = critical_value(dist, beta);
  return ConstrainedMeanRegion{center, std::sqrt(c / static_cast<double>(n)), c, beta, B};
}

}  // namespace experimental

}  // namespace sphstat
