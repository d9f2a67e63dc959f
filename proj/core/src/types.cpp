#include "hmpp/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hmpp/error.hpp"

namespace hmpp {

EventSpace::EventSpace(std::size_t count) : EventSpace(std::vector<double>(count, 1.0)) {}

EventSpace::EventSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "event space needs at least one event type");
  }
  for (std::size_t e = 0; e < weights_.size(); ++e) {
    if (!(weights_[e] > 0.0) || !std::isfinite(weights_[e])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "event weight " + std::to_string(e) + " must be positive and finite");
    }
  }
  total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

StateValue StateValue::continuous(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument, "continuous state must be finite");
  }
  return StateValue(Continuous{value});
}

std::size_t StateValue::index() const {
  if (const auto* d = std::get_if<Discrete>(&v_)) return d->index;
  throw Error(ErrorCode::kInvalidArgument, "state is continuous, not a discrete index");
}

double StateValue::value() const {
  if (const auto* c = std::get_if<Continuous>(&v_)) return c->value;
  throw Error(ErrorCode::kInvalidArgument, "state is discrete, not a real value");
}

StateSpace StateSpace::discrete(std::size_t count) {
  if (count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "discrete state space needs at least one state");
  }
  return StateSpace(count);
}

bool StateSpace::contains(const StateValue& x) const noexcept {
  if (is_discrete()) return x.is_discrete() && x.index() < count_;
  return !x.is_discrete();
}

namespace {

void check_ordered(std::span<const EventRecord> records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!std::isfinite(records[i].time)) {
      throw Error(ErrorCode::kInvalidArgument, "record " + std::to_string(i) + " has non-finite time");
    }
    if (i > 0 && !(records[i - 1].time < records[i].time)) {
      throw Error(ErrorCode::kNonIncreasingTimes,
                  "record " + std::to_string(i) + " at time " + std::to_string(records[i].time) +
                      " does not follow " + std::to_string(records[i - 1].time));
    }
  }
}

}  // namespace

Trajectory::Trajectory(std::vector<EventRecord> initial, std::vector<EventRecord> events,
                       StateValue origin_state)
    : initial_count_(initial.size()), origin_(origin_state) {
  for (const auto& r : initial) {
    if (r.time > 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "initial-condition record after time 0");
    }
  }
  for (const auto& r : events) {
    if (!(r.time > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "event record at or before time 0");
    }
  }
  records_ = std::move(initial);
  records_.insert(records_.end(), events.begin(), events.end());
  check_ordered(records_);
}

HistoryView::HistoryView(const Trajectory& trajectory, double cut)
    : HistoryView(trajectory.records(), cut, trajectory.origin_state()) {}

HistoryView::HistoryView(std::span<const EventRecord> records, double cut, StateValue origin_state)
    : cut_(cut), origin_(origin_state) {
  auto end = std::lower_bound(records.begin(), records.end(), cut,
                              [](const EventRecord& r, double t) { return r.time < t; });
  records_ = records.first(static_cast<std::size_t>(end - records.begin()));
}

StateValue state_functional(const HistoryView& history) {
  if (history.records().empty()) return history.origin_state();
  return history.records().back().mark.state;
}

std::size_t count_events(const HistoryView& history, TimeWindow window,
                         std::optional<std::span<const std::size_t>> event_filter) {
  if (window.hi < window.lo) {
    throw Error(ErrorCode::kInvalidArgument, "window bounds out of order");
  }
  std::size_t n = 0;
  for (const auto& r : history.records()) {
    if (r.time <= window.lo || r.time > window.hi) continue;
    if (event_filter &&
        std::find(event_filter->begin(), event_filter->end(), r.mark.event) == event_filter->end()) {
      continue;
    }
    ++n;
  }
  return n;
}

std::vector<EventRecord> to_enumeration(const Trajectory& trajectory) {
  auto r = trajectory.records();
  return {r.begin(), r.end()};
}

Trajectory from_enumeration(std::vector<EventRecord> pairs, StateValue origin_state) {
  check_ordered(pairs);
  auto split = std::find_if(pairs.begin(), pairs.end(), [](const EventRecord& r) { return r.time > 0.0; });
  std::vector<EventRecord> events(split, pairs.end());
  pairs.erase(split, pairs.end());
  return Trajectory(std::move(pairs), std::move(events), origin_state);
}

}  // namespace hmpp
