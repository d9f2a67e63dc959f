#include "hmpp/driver.hpp"

#include <algorithm>
#include <cmath>

#include "hmpp/error.hpp"

namespace hmpp {

Driver::Driver(std::uint64_t seed) : seed_(seed), rng_(seed, kCandidateStream) {}

Candidate Driver::next_candidate(std::span<const double> bounds, std::span<const double> weights) {
  if (bounds.size() != weights.size()) {
    throw Error(ErrorCode::kInvalidArgument, "majorant and weight vectors differ in length");
  }
  double total = 0.0;
  for (std::size_t e = 0; e < bounds.size(); ++e) {
    if (!(bounds[e] >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative majorant");
    total += weights[e] * bounds[e];
  }
  if (!std::isfinite(total)) throw Error(ErrorCode::kNonFiniteIntensity, "majorant is not finite");
  if (total == 0.0) throw Error(ErrorCode::kZeroMajorant, "total majorant is zero");

  const double time = cursor_ + rng_.exponential(total);
  if (!(time > cursor_)) {
    throw Error(ErrorCode::kTimeResolutionExhausted, "candidate gap below time resolution");
  }
  cursor_ = time;
  ++drawn_;

  const double u = rng_.uniform() * total;
  double offset = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t e = 0; e < bounds.size(); ++e) {
    const double width = weights[e] * bounds[e];
    if (width == 0.0) continue;
    last_nonzero = e;
    if (u < offset + width) return {time, e, u - offset};
    offset += width;
  }
  // u landed past the accumulated widths through rounding; it belongs to the
  // top strip.
  const double width = weights[last_nonzero] * bounds[last_nonzero];
  const double top = offset - width;
  return {time, last_nonzero, std::min(std::nextafter(width, 0.0), std::max(0.0, u - top))};
}

Candidate CoupledSource::next_candidate(std::span<const double> bounds_a,
                                        std::span<const double> bounds_b,
                                        std::span<const double> weights) {
  if (bounds_a.size() != bounds_b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "coupled majorants differ in length");
  }
  merged_.resize(bounds_a.size());
  for (std::size_t e = 0; e < bounds_a.size(); ++e) merged_[e] = std::max(bounds_a[e], bounds_b[e]);
  return driver_.next_candidate(merged_, weights);
}

CoupledSource fork_for_coupling(Driver driver) {
  if (driver.cursor() != 0.0 || driver.candidates_drawn() != 0) {
    throw Error(ErrorCode::kInvalidArgument, "coupling requires a fresh driver");
  }
  return CoupledSource(std::move(driver));
}

}  // namespace hmpp
