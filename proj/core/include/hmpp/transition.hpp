#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "hmpp/rng.hpp"
#include "hmpp/types.hpp"

namespace hmpp {

/// phi(x' | e, x): law of the post-event state given the event type and the
/// state just before the event.
class TransitionFunction {
 public:
  /// Row-stochastic table indexed [current state][event][next state].
  struct Table {
    std::size_t states = 0;
    std::size_t events = 0;
    std::vector<double> probs;
    /// Cumulative rows for inverse-CDF sampling.
    std::vector<double> cumulative;
  };
  /// Real-valued family with a user sampler and density. `support_lo` and
  /// `support_hi` bound the next state for the load-time normalization check
  /// around a reference state of 0. `sup_density` is ||phi||_inf. A family
  /// with `atomic == true` is a point mass (e.g. a deterministic jump): it has
  /// no density and an infinite sup-norm.
  struct Family {
    std::function<double(double next, std::size_t e, double current)> density;
    std::function<double(std::size_t e, double current, Rng& rng)> sampler;
    double support_lo = 0.0;
    double support_hi = 0.0;
    double sup_density = 0.0;
    bool atomic = false;
  };

  /// Rows must sum to 1 within 1e-12; they are then renormalized exactly.
  static TransitionFunction table(std::size_t states, std::size_t events, std::vector<double> probs);
  static TransitionFunction identity(std::size_t states, std::size_t events);
  /// x' = x + J with J ~ Normal(mean, sd^2), for every event type.
  static TransitionFunction gaussian_increment(double mean, double sd);
  /// x' = x + jump, deterministically.
  static TransitionFunction constant_jump(double jump);
  /// Checks that the density integrates to 1 within 1e-6 on its support for
  /// every event in [0, events) at reference state 0.
  static TransitionFunction family(Family spec, std::size_t events);

  bool is_discrete() const noexcept { return std::holds_alternative<Table>(kind_); }
  const Table* as_table() const noexcept { return std::get_if<Table>(&kind_); }
  const Family* as_family() const noexcept { return std::get_if<Family>(&kind_); }

  /// Event count the function was built for (0 for families usable with any).
  std::size_t events() const noexcept;

  StateValue sample(std::size_t e, const StateValue& current, Rng& rng) const;
  /// Throws ErrorCode::kOutOfSupport for a discrete index out of range.
  double density(const StateValue& next, std::size_t e, const StateValue& current) const;
  double row_probability(std::size_t current, std::size_t e, std::size_t next) const;
  /// ||phi||_inf: largest table entry, or the family's declared sup.
  double sup_norm() const noexcept;

  /// Discrete table whose rows for states a and b are exchanged, for every event.
  TransitionFunction with_swapped_rows(std::size_t a, std::size_t b) const;

 private:
  using Kind = std::variant<Table, Family>;
  TransitionFunction(Kind kind, std::size_t events) : kind_(std::move(kind)), events_(events) {}
  Kind kind_;
  std::size_t events_ = 0;
};

}  // namespace hmpp
