#include "hmpp/model.hpp"

#include <string>

#include "hmpp/error.hpp"

namespace hmpp {

void ModelSpec::validate() const {
  const std::size_t d = events.size();
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidModel, msg); };
  if (functional.events() != d) fail("event functional has " + std::to_string(functional.events()) +
                                     " event types, event space has " + std::to_string(d));
  if (const auto* h = functional.as_hawkes()) {
    if (h->kernel.state_slots() != states.slots()) fail("kernel state slots do not match state space");
  }
  if (const auto* m = functional.as_markov()) {
    if (!m->state_rates.empty() && m->state_rates.size() != states.size()) {
      fail("markov rate table does not match state count");
    }
  }
  if (const auto* t = transition.as_table()) {
    if (!states.is_discrete()) fail("discrete transition table with a continuous state space");
    if (t->states != states.size()) fail("transition table state count mismatch");
    if (t->events != d) fail("transition table event count mismatch");
  } else if (states.is_discrete()) {
    fail("continuous transition family with a discrete state space");
  } else if (transition.events() != 0 && transition.events() != d) {
    fail("transition family event count mismatch");
  }
  if (!states.contains(initial.origin_state())) fail("origin state outside the state space");
  if (!initial.events().empty()) fail("initial condition has records after time 0");
  for (const auto& r : initial.records()) {
    if (r.mark.event >= d) fail("initial record with unknown event type");
    if (!states.contains(r.mark.state)) fail("initial record with state outside the state space");
  }
}

double mark_intensity(const ModelSpec& model, const Mark& mark, const HistoryView& history) {
  const StateValue current = state_functional(history);
  return model.transition.density(mark.state, mark.event, current) *
         event_intensity(model.functional, mark.event, history, model.states);
}

Trajectory make_initial(std::vector<EventRecord> records, StateValue origin_state) {
  return Trajectory(std::move(records), {}, origin_state);
}

}  // namespace hmpp
