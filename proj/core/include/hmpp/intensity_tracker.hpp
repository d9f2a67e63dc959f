#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hmpp/model.hpp"

namespace hmpp {

/// Incremental evaluator of lambda-bar along a growing history.
///
/// The tracker is anchored at the time of the most recent record it has seen
/// (or 0 before any simulated event). Queries are valid for times strictly
/// after the anchor and before the next record. Exponential kernels are
/// evaluated through decayed per-target sums in O(d) per query; other kernels
/// sum over the stored history.
class IntensityTracker {
 public:
  /// Starts from `model.initial`, anchored at time 0.
  explicit IntensityTracker(const ModelSpec& model);
  ~IntensityTracker();
  IntensityTracker(IntensityTracker&&) noexcept;
  IntensityTracker& operator=(IntensityTracker&&) noexcept;

  double anchor() const noexcept;
  const StateValue& state() const noexcept;
  std::size_t count() const noexcept;

  /// lambda-bar(e | records before t) for t > anchor().
  double intensity(std::size_t e, double t) const;
  /// Majorant valid on (anchor(), next record].
  void bounds(std::span<double> out) const;
  /// Integral of lambda-bar(e | .) over [a, b] with anchor() <= a <= b.
  double integral(std::size_t e, double a, double b) const;
  /// Appends a record at a time after the anchor and re-anchors there.
  void push(const EventRecord& record);

  class Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace hmpp
