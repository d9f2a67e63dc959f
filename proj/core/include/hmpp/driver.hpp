#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hmpp/rng.hpp"

namespace hmpp {

/// An atom of the driving Poisson measure restricted to the strip stack
/// [0, B_total) above the current time.
struct Candidate {
  double time = 0.0;
  std::size_t event = 0;
  /// Offset inside the chosen type's strip, in [0, weight(e) * B(e)).
  double height = 0.0;
};

/// Lazily realizes the driving Poisson measure on (0, inf) x E x (0, inf).
///
/// Given per-type majorants B(e), the atoms lying below the stacked strips of
/// widths weight(e) * B(e) form a homogeneous Poisson stream of rate
/// B_total = sum_e weight(e) * B(e): exponential gaps, a strip chosen in
/// proportion to its width and a uniform height inside it. The stream is
/// memoryless, so the majorant may be replaced after any candidate.
///
/// Post-event states are drawn from a separate mark stream so that the
/// candidate sequence does not depend on how marks are consumed.
class Driver {
 public:
  static constexpr std::uint64_t kCandidateStream = 0;
  static constexpr std::uint64_t kMarkStream = 1;

  explicit Driver(std::uint64_t seed);

  /// Throws ErrorCode::kZeroMajorant when B_total == 0 and
  /// ErrorCode::kTimeResolutionExhausted when the gap is below the
  /// resolution of the current time.
  Candidate next_candidate(std::span<const double> bounds, std::span<const double> weights);

  /// A fresh mark stream for one consumer of this driver's seed.
  Rng mark_stream() const { return Rng(seed_, kMarkStream); }

  std::uint64_t seed() const noexcept { return seed_; }
  double cursor() const noexcept { return cursor_; }
  std::uint64_t candidates_drawn() const noexcept { return drawn_; }
  std::uint64_t stream_position() const noexcept { return rng_.draws(); }

 private:
  std::uint64_t seed_;
  Rng rng_;
  double cursor_ = 0.0;
  std::uint64_t drawn_ = 0;
};

/// One driver observed in lockstep by a dominated and a dominating consumer.
/// Every candidate is drawn under the elementwise maximum of both majorants,
/// so both consumers see the identical candidate sequence.
class CoupledSource {
 public:
  Candidate next_candidate(std::span<const double> bounds_a, std::span<const double> bounds_b,
                           std::span<const double> weights);

  Driver& driver() noexcept { return driver_; }
  const Driver& driver() const noexcept { return driver_; }

 private:
  friend CoupledSource fork_for_coupling(Driver driver);
  explicit CoupledSource(Driver driver) : driver_(std::move(driver)) {}

  Driver driver_;
  std::vector<double> merged_;
};

/// Requires a fresh driver (cursor at 0).
CoupledSource fork_for_coupling(Driver driver);

}  // namespace hmpp
