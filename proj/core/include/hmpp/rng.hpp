#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace hmpp {

/// xoshiro256** generator seeded through SplitMix64.
///
/// All variate transforms are implemented here rather than taken from
/// <random>, whose distribution algorithms differ between standard libraries.
/// Identical (seed, stream) pairs give identical sequences on every platform
/// with an IEEE-754 double and a correctly rounded libm.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "xoshiro256starstar-splitmix64-v1";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Exponential with the given rate (> 0).
  double exponential(double rate);
  /// Standard normal via the Marsaglia polar method.
  double normal();

  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t draws_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hmpp
