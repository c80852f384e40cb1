#pragma once

#include <cstdint>

namespace evidfuse {

/// SplitMix64 (Steele, Lea & Flood 2014): state += 0x9E3779B97F4A7C15, then the
/// output is the avalanche finalizer below applied to the new state. Used both as
/// the per-run stream and as the seed mixer, so streams are reproducible in any
/// language from the recurrence alone.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t next() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Seed for Monte-Carlo run `run_index`: mix(master + run_index * gamma).
constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
  return SplitMix64::mix(master_seed + run_index * SplitMix64::kGamma);
}

}  // namespace evidfuse
