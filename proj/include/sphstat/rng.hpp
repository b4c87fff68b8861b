#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "sphstat/error.hpp"

namespace sphstat {

/// Identifies one independent random stream: a master seed plus a stream index.
/// Distinct (master_seed, stream_index) pairs key distinct Philox counters, so
/// streams can be consumed in parallel in any order with bit-identical results.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

namespace stream_domain {
// Stream-index namespace layout: domain(15 bits) | major(24 bits) | minor(24 bits).
inline constexpr std::uint64_t data = 0;
inline constexpr std::uint64_t replicate = 1;
inline constexpr std::uint64_t pool = 2;
inline constexpr std::uint64_t user = 3;
}  // namespace stream_domain

/// Packs (domain, major, minor) into a stream index. `major` typically tags a
/// simulation trial and `minor` a bootstrap replicate; both capped at 2^24.
inline std::uint64_t substream(std::uint64_t domain, std::uint64_t major, std::uint64_t minor) {
  if (domain >= (1ull << 15) || major >= (1ull << 24) || minor >= (1ull << 24))
    fail(errc::bad_dimension, "substream id out of range");
  return (domain << 48) | (major << 24) | minor;
}

/// Philox4x32-10 counter-based generator. The 64-bit key is the master seed;
/// the 128-bit counter holds (block index, stream index). Output depends only
/// on (seed, position), never on call order elsewhere in the process.
class PhiloxEngine {
 public:
  explicit PhiloxEngine(SeedSpec seed)
      : key0_(static_cast<std::uint32_t>(seed.master_seed)),
        key1_(static_cast<std::uint32_t>(seed.master_seed >> 32)),
        stream_(seed.stream_index) {
    refill();
  }

  std::uint32_t next_u32() {
    if (idx_ == 4) {
      ++block_;
      refill();
    }
    return out_[idx_++];
  }

 private:
  void refill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ull * c0;
      const std::uint64_t p1 = 0xCD9E8D57ull * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    out_ = {c0, c1, c2, c3};
    idx_ = 0;
  }

  std::uint32_t key0_;
  std::uint32_t key1_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> out_{};
  int idx_ = 0;
};

/// Sequential draws layered over one Philox stream.
class Rng {
 public:
  explicit Rng(SeedSpec seed) : engine_(seed) {}

  std::uint64_t next_u64() {
    const std::uint64_t lo = engine_.next_u32();
    const std::uint64_t hi = engine_.next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; pairs are cached.
  double next_gauss() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [0, n) via the multiply-high reduction.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  PhiloxEngine engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sphstat
