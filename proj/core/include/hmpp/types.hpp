#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace hmpp {

/// Finite event space with per-type reference-measure weights.
class EventSpace {
 public:
  /// `count` event types, each with unit weight.
  explicit EventSpace(std::size_t count = 1);
  explicit EventSpace(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double weight(std::size_t e) const { return weights_.at(e); }
  std::span<const double> weights() const noexcept { return weights_; }
  double total_mass() const noexcept { return total_mass_; }

  friend bool operator==(const EventSpace&, const EventSpace&) = default;

 private:
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

namespace detail {
struct DiscreteState {
  std::size_t index = 0;
  friend bool operator==(const DiscreteState&, const DiscreteState&) = default;
};
struct ContinuousState {
  double value = 0.0;
  friend bool operator==(const ContinuousState&, const ContinuousState&) = default;
};
}  // namespace detail

/// Post-event system state: a discrete index or a real value.
class StateValue {
 public:
  StateValue() = default;

  static StateValue discrete(std::size_t index) { return StateValue(Discrete{index}); }
  static StateValue continuous(double value);

  bool is_discrete() const noexcept { return std::holds_alternative<Discrete>(v_); }
  std::size_t index() const;
  double value() const;

  friend bool operator==(const StateValue&, const StateValue&) = default;

 private:
  using Discrete = detail::DiscreteState;
  using Continuous = detail::ContinuousState;
  explicit StateValue(Discrete d) : v_(d) {}
  explicit StateValue(Continuous c) : v_(c) {}

  std::variant<Discrete, Continuous> v_;
};

class StateSpace {
 public:
  static StateSpace discrete(std::size_t count);
  static StateSpace continuous() { return StateSpace(0); }

  bool is_discrete() const noexcept { return count_ > 0; }
  /// Number of discrete states; 0 for a real-valued state space.
  std::size_t size() const noexcept { return count_; }
  /// Slots used by state-indexed tables: one per discrete state, or a single
  /// state-independent slot for continuous spaces.
  std::size_t slots() const noexcept { return count_ > 0 ? count_ : 1; }
  std::size_t slot_of(const StateValue& x) const { return is_discrete() ? x.index() : 0; }
  bool contains(const StateValue& x) const noexcept;

  friend bool operator==(const StateSpace&, const StateSpace&) = default;

 private:
  explicit StateSpace(std::size_t count) : count_(count) {}
  std::size_t count_ = 0;
};

struct Mark {
  std::size_t event = 0;
  StateValue state;

  friend bool operator==(const Mark&, const Mark&) = default;
};

struct EventRecord {
  double time = 0.0;
  Mark mark;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Half-open interval (lo, hi].
struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// A realization of a marked point process: the initial condition on
/// (-inf, 0] followed by the events on (0, inf). Immutable once built.
///
/// Both segments live in one contiguous, strictly time-ordered buffer so that
/// histories are plain sub-spans.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<EventRecord> initial, std::vector<EventRecord> events,
             StateValue origin_state = {});

  std::span<const EventRecord> initial() const noexcept {
    return std::span(records_).first(initial_count_);
  }
  std::span<const EventRecord> events() const noexcept {
    return std::span(records_).subspan(initial_count_);
  }
  std::span<const EventRecord> records() const noexcept { return records_; }
  const StateValue& origin_state() const noexcept { return origin_; }
  bool empty() const noexcept { return records_.empty(); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<EventRecord> records_;
  std::size_t initial_count_ = 0;
  StateValue origin_;
};

/// Read-only view of the records strictly before `cut`.
class HistoryView {
 public:
  HistoryView(const Trajectory& trajectory, double cut);
  /// `records` must be time ordered; anything at or after `cut` is dropped.
  HistoryView(std::span<const EventRecord> records, double cut, StateValue origin_state);

  std::span<const EventRecord> records() const noexcept { return records_; }
  double cut() const noexcept { return cut_; }
  const StateValue& origin_state() const noexcept { return origin_; }
  std::size_t size() const noexcept { return records_.size(); }

 private:
  std::span<const EventRecord> records_;
  double cut_;
  StateValue origin_;
};

/// State coordinate of the most recent record before the cut, or the origin
/// state when the history is empty.
StateValue state_functional(const HistoryView& history);

/// Number of records in `window` (and before the cut) whose event index is in
/// `event_filter`, or all records when no filter is given.
std::size_t count_events(const HistoryView& history, TimeWindow window,
                         std::optional<std::span<const std::size_t>> event_filter = std::nullopt);

std::vector<EventRecord> to_enumeration(const Trajectory& trajectory);

/// Splits a strictly increasing enumeration at time 0. Throws
/// ErrorCode::kNonIncreasingTimes when the times are not strictly increasing.
Trajectory from_enumeration(std::vector<EventRecord> pairs, StateValue origin_state = {});

}  // namespace hmpp
