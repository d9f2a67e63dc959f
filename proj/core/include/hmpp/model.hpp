#pragma once

#include "hmpp/event_functional.hpp"
#include "hmpp/transition.hpp"
#include "hmpp/types.hpp"

namespace hmpp {

/// Everything needed to simulate a hybrid marked point process: the event
/// and state spaces, psi = phi * lambda-bar, and the initial condition.
struct ModelSpec {
  EventSpace events;
  StateSpace states = StateSpace::discrete(1);
  TransitionFunction transition = TransitionFunction::identity(1, 1);
  EventFunctional functional = EventFunctional::constant({1.0});
  /// Records at times <= 0 only.
  Trajectory initial;

  /// Throws ErrorCode::kInvalidModel when the components disagree on
  /// dimensions or the initial condition is malformed.
  void validate() const;
};

/// psi((e, x') | h) = phi(x' | e, F(h)) * lambda-bar(e | h).
double mark_intensity(const ModelSpec& model, const Mark& mark, const HistoryView& history);

/// Builds the initial-condition trajectory (all times <= 0).
Trajectory make_initial(std::vector<EventRecord> records, StateValue origin_state);

}  // namespace hmpp
