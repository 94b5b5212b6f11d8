#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace bernergy {

/// Counter-based generator ("splitmix64-counter").
///
/// The i-th draw of stream s under seed k is
///   mix(key + (i + 1) * 0x9E3779B97F4A7C15),  key = mix(k ^ mix(s + 0xD1B54A32D192ED03))
/// where mix is the splitmix64 finalizer. Any draw can be recomputed from
/// (seed, stream, index) alone, which makes replica b of a resampling loop
/// reproducible without touching the other replicas.
class counter_rng {
 public:
  static constexpr const char* algorithm = "splitmix64-counter";

  explicit counter_rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ mix(stream + 0xD1B54A32D192ED03ULL))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() noexcept { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  std::uint64_t counter() const noexcept { return counter_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection, n > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller (cosine branch only; two uniforms per draw).
  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bernergy
