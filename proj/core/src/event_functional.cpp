#include "hmpp/event_functional.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "hmpp/error.hpp"

namespace hmpp {

namespace {

std::string short_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_rates(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + "[" + std::to_string(i) + "] must be finite and >= 0");
    }
  }
}

double checked(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteIntensity, "intensity evaluation overflowed");
  if (v < 0.0) throw Error(ErrorCode::kInvalidModel, "event functional evaluated negative");
  return v;
}

}  // namespace

EventFunctional EventFunctional::constant(std::vector<double> rates) {
  check_rates(rates, "constant rates");
  return EventFunctional(ConstantRate{std::move(rates)});
}

EventFunctional EventFunctional::markov(std::vector<double> state_rates, std::vector<double> shares) {
  check_rates(shares, "event shares");
  if (state_rates.empty()) throw Error(ErrorCode::kInvalidArgument, "markov rates are empty");
  for (double c : state_rates) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::kInvalidArgument, "markov state rates must be positive");
    }
  }
  auto table = state_rates;
  MarkovRate m;
  m.rate = [table](const StateValue& x) {
    if (x.index() >= table.size()) throw Error(ErrorCode::kOutOfSupport, "state outside rate table");
    return table[x.index()];
  };
  m.shares = std::move(shares);
  m.state_rates = std::move(state_rates);
  return EventFunctional(std::move(m));
}

EventFunctional EventFunctional::markov(std::function<double(const StateValue&)> rate,
                                        std::vector<double> shares) {
  check_rates(shares, "event shares");
  if (!rate) throw Error(ErrorCode::kInvalidArgument, "markov rate function is empty");
  return EventFunctional(MarkovRate{std::move(rate), std::move(shares), {}});
}

EventFunctional EventFunctional::hawkes(std::vector<double> base, Kernel kernel) {
  check_rates(base, "base rates");
  if (kernel.events() != base.size()) {
    throw Error(ErrorCode::kInvalidArgument, "kernel and base rates disagree on event count");
  }
  return EventFunctional(StateDependentHawkes{std::move(base), std::move(kernel)});
}

EventFunctional EventFunctional::count_dominated(std::function<double(std::size_t)> a,
                                                 std::size_t events,
                                                 std::optional<bool> declared_divergent,
                                                 std::string description) {
  if (!a) throw Error(ErrorCode::kInvalidArgument, "count-dominated function is empty");
  if (events == 0) throw Error(ErrorCode::kInvalidArgument, "count-dominated needs an event type");
  // Spot-check positivity and monotonicity on a grid.
  double prev = 0.0;
  for (std::size_t n = 0; n <= 1024; n = (n == 0 ? 1 : n * 2)) {
    const double v = a(n);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "a(" + std::to_string(n) + ") must be positive");
    }
    if (v < prev) {
      throw Error(ErrorCode::kInvalidArgument,
                  "a is not non-decreasing at n = " + std::to_string(n));
    }
    prev = v;
  }
  return EventFunctional(
      CountDominated{std::move(a), events, declared_divergent, std::move(description)});
}

EventFunctional EventFunctional::count_power(double scale, double offset, double power,
                                             std::size_t events) {
  if (!(scale > 0.0) || !(offset > 0.0) || !(power >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "count power law needs scale > 0, offset > 0, power >= 0");
  }
  auto a = [scale, offset, power](std::size_t n) {
    return scale * std::pow(offset + static_cast<double>(n), power);
  };
  return count_dominated(a, events, power <= 1.0,
                         short_number(scale) + " * (" + short_number(offset) + " + n)^" + short_number(power));
}

std::size_t EventFunctional::events() const noexcept {
  return std::visit(
      [](const auto& f) -> std::size_t {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, ConstantRate>) {
          return f.rates.size();
        } else if constexpr (std::is_same_v<F, MarkovRate>) {
          return f.shares.size();
        } else if constexpr (std::is_same_v<F, StateDependentHawkes>) {
          return f.base.size();
        } else {
          return f.events;
        }
      },
      kind_);
}

double event_intensity(const EventFunctional& f, std::size_t e, const HistoryView& history,
                       const StateSpace& states) {
  if (e >= f.events()) throw Error(ErrorCode::kOutOfSupport, "event index out of range");
  if (const auto* c = f.as_constant()) return c->rates[e];
  if (const auto* m = f.as_markov()) return checked(m->rate(state_functional(history)) * m->shares[e]);
  if (const auto* n = f.as_count()) return checked(n->a(history.size()));
  const auto& h = *f.as_hawkes();
  double sum = h.base[e];
  for (const auto& r : history.records()) sum += h.kernel(history.cut() - r.time, r.mark, e, states);
  return checked(sum);
}

double total_event_rate(const EventFunctional& f, const HistoryView& history,
                        const EventSpace& events, const StateSpace& states) {
  double total = 0.0;
  for (std::size_t e = 0; e < events.size(); ++e) {
    total += events.weight(e) * event_intensity(f, e, history, states);
  }
  return total;
}

std::vector<double> intensity_upper_bound(const EventFunctional& f, const HistoryView& history,
                                          double from_time, const StateSpace& states) {
  if (from_time < history.cut()) {
    throw Error(ErrorCode::kInvalidArgument, "bound requested before the history cut");
  }
  std::vector<double> bounds(f.events());
  const auto* h = f.as_hawkes();
  for (std::size_t e = 0; e < bounds.size(); ++e) {
    if (h == nullptr) {
      // Piecewise constant between records: the current value bounds itself.
      bounds[e] = event_intensity(f, e, history, states);
      continue;
    }
    double sum = h->base[e];
    for (const auto& r : history.records()) {
      sum += h->kernel.sup_from(from_time - r.time, r.mark, e, states);
    }
    bounds[e] = checked(sum);
  }
  return bounds;
}

}  // namespace hmpp
