#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hmpp/kernel.hpp"
#include "hmpp/types.hpp"

namespace hmpp {

/// The event functional lambda-bar(e | history).
class EventFunctional {
 public:
  struct ConstantRate {
    std::vector<double> rates;
  };
  /// lambda-bar(e | h) = rate(current state) * shares[e].
  struct MarkovRate {
    std::function<double(const StateValue&)> rate;
    std::vector<double> shares;
    /// Per-state rates when the state space is discrete (used by oracles).
    std::vector<double> state_rates;
  };
  /// lambda-bar(e | h) = base[e] + sum over past records of k(lag, mark, e).
  struct StateDependentHawkes {
    std::vector<double> base;
    Kernel kernel;
  };
  /// lambda-bar(e | h) = a(number of past records) for every type.
  struct CountDominated {
    std::function<double(std::size_t)> a;
    std::size_t events = 1;
    /// User declaration that sum_n 1 / a(n) diverges.
    std::optional<bool> declared_divergent;
    std::string description;
  };

  static EventFunctional constant(std::vector<double> rates);
  static EventFunctional markov(std::vector<double> state_rates, std::vector<double> shares);
  static EventFunctional markov(std::function<double(const StateValue&)> rate,
                                std::vector<double> shares);
  static EventFunctional hawkes(std::vector<double> base, Kernel kernel);
  static EventFunctional count_dominated(std::function<double(std::size_t)> a, std::size_t events,
                                         std::optional<bool> declared_divergent = std::nullopt,
                                         std::string description = {});
  /// a(n) = scale * (offset + n)^power; divergence of sum 1/a(n) is declared
  /// from power <= 1.
  static EventFunctional count_power(double scale, double offset, double power, std::size_t events);

  std::size_t events() const noexcept;

  const ConstantRate* as_constant() const noexcept { return std::get_if<ConstantRate>(&kind_); }
  const MarkovRate* as_markov() const noexcept { return std::get_if<MarkovRate>(&kind_); }
  const StateDependentHawkes* as_hawkes() const noexcept {
    return std::get_if<StateDependentHawkes>(&kind_);
  }
  const CountDominated* as_count() const noexcept { return std::get_if<CountDominated>(&kind_); }

 private:
  using Kind = std::variant<ConstantRate, MarkovRate, StateDependentHawkes, CountDominated>;
  explicit EventFunctional(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// lambda-bar(e | h) by direct evaluation over the history. Throws
/// ErrorCode::kNonFiniteIntensity on overflow.
double event_intensity(const EventFunctional& f, std::size_t e, const HistoryView& history,
                       const StateSpace& states);

/// sum_e weight(e) * lambda-bar(e | h).
double total_event_rate(const EventFunctional& f, const HistoryView& history,
                        const EventSpace& events, const StateSpace& states);

/// Per-type bounds B(e) >= lambda-bar(e | h shifted to s) for every s >=
/// from_time, as long as no record is added to `history`.
std::vector<double> intensity_upper_bound(const EventFunctional& f, const HistoryView& history,
                                          double from_time, const StateSpace& states);

}  // namespace hmpp
