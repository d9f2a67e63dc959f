#include "hmpp/transition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hmpp/error.hpp"

namespace hmpp {

TransitionFunction TransitionFunction::table(std::size_t states, std::size_t events,
                                             std::vector<double> probs) {
  if (states == 0 || events == 0) {
    throw Error(ErrorCode::kInvalidArgument, "transition table needs states and events");
  }
  if (probs.size() != states * events * states) {
    throw Error(ErrorCode::kInvalidArgument, "transition table has wrong size");
  }
  Table t{states, events, std::move(probs), {}};
  t.cumulative.resize(t.probs.size());
  for (std::size_t row = 0; row < states * events; ++row) {
    auto first = t.probs.begin() + static_cast<std::ptrdiff_t>(row * states);
    double sum = 0.0;
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(states); ++it) {
      if (!(*it >= 0.0) || !std::isfinite(*it)) {
        throw Error(ErrorCode::kInvalidArgument, "transition probabilities must be in [0, 1]");
      }
      sum += *it;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw Error(ErrorCode::kInvalidArgument,
                  "transition row (state " + std::to_string(row / events) + ", event " +
                      std::to_string(row % events) + ") sums to " + std::to_string(sum));
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < states; ++j) {
      first[static_cast<std::ptrdiff_t>(j)] /= sum;
      acc += first[static_cast<std::ptrdiff_t>(j)];
      t.cumulative[row * states + j] = acc;
    }
  }
  return TransitionFunction(std::move(t), events);
}

TransitionFunction TransitionFunction::identity(std::size_t states, std::size_t events) {
  std::vector<double> probs(states * events * states, 0.0);
  for (std::size_t x = 0; x < states; ++x) {
    for (std::size_t e = 0; e < events; ++e) probs[(x * events + e) * states + x] = 1.0;
  }
  return table(states, events, std::move(probs));
}

TransitionFunction TransitionFunction::gaussian_increment(double mean, double sd) {
  if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd)) {
    throw Error(ErrorCode::kInvalidArgument, "gaussian increment needs finite mean and sd > 0");
  }
  Family f;
  f.density = [mean, sd](double next, std::size_t, double current) {
    const double z = (next - current - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  };
  f.sampler = [mean, sd](std::size_t, double current, Rng& rng) {
    return current + mean + sd * rng.normal();
  };
  f.support_lo = -std::numeric_limits<double>::infinity();
  f.support_hi = std::numeric_limits<double>::infinity();
  f.sup_density = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  return TransitionFunction(std::move(f), 0);
}

TransitionFunction TransitionFunction::constant_jump(double jump) {
  if (!std::isfinite(jump)) throw Error(ErrorCode::kInvalidArgument, "jump must be finite");
  Family f;
  f.sampler = [jump](std::size_t, double current, Rng&) { return current + jump; };
  f.sup_density = std::numeric_limits<double>::infinity();
  f.atomic = true;
  return TransitionFunction(std::move(f), 0);
}

TransitionFunction TransitionFunction::family(Family spec, std::size_t events) {
  if (!spec.sampler) throw Error(ErrorCode::kInvalidArgument, "transition family needs a sampler");
  if (!spec.atomic) {
    if (!spec.density) throw Error(ErrorCode::kInvalidArgument, "transition family needs a density");
    if (!(spec.support_lo < spec.support_hi)) {
      throw Error(ErrorCode::kInvalidArgument, "transition family support is empty");
    }
    for (std::size_t e = 0; e < std::max<std::size_t>(events, 1); ++e) {
      auto f = [&](double x) { return spec.density(x, e, 0.0); };
      const double mass = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          f, spec.support_lo, spec.support_hi, 15, 1e-10);
      if (!(std::abs(mass - 1.0) <= 1e-6)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "transition density integrates to " + std::to_string(mass) + " for event " +
                        std::to_string(e));
      }
    }
  }
  return TransitionFunction(std::move(spec), events);
}

std::size_t TransitionFunction::events() const noexcept { return events_; }

StateValue TransitionFunction::sample(std::size_t e, const StateValue& current, Rng& rng) const {
  if (const auto* t = as_table()) {
    const std::size_t row = (current.index() * t->events + e) * t->states;
    const double u = rng.uniform();
    const auto first = t->cumulative.begin() + static_cast<std::ptrdiff_t>(row);
    const auto last = first + static_cast<std::ptrdiff_t>(t->states);
    auto it = std::upper_bound(first, last, u);
    // Rounding can leave the final cumulative entry a hair under 1.
    if (it == last) {
      it = last - 1;
      while (it != first && t->probs[row + static_cast<std::size_t>(it - first)] == 0.0) --it;
    }
    return StateValue::discrete(static_cast<std::size_t>(it - first));
  }
  const auto& f = std::get<Family>(kind_);
  return StateValue::continuous(f.sampler(e, current.value(), rng));
}

double TransitionFunction::row_probability(std::size_t current, std::size_t e,
                                           std::size_t next) const {
  const auto* t = as_table();
  if (t == nullptr) throw Error(ErrorCode::kInvalidArgument, "not a discrete transition table");
  if (current >= t->states || next >= t->states || e >= t->events) {
    throw Error(ErrorCode::kOutOfSupport, "transition index out of range");
  }
  return t->probs[(current * t->events + e) * t->states + next];
}

double TransitionFunction::density(const StateValue& next, std::size_t e,
                                   const StateValue& current) const {
  if (is_discrete()) {
    if (!next.is_discrete() || !current.is_discrete()) {
      throw Error(ErrorCode::kOutOfSupport, "continuous state given to a discrete table");
    }
    return row_probability(current.index(), e, next.index());
  }
  const auto& f = std::get<Family>(kind_);
  if (f.atomic) throw Error(ErrorCode::kOutOfSupport, "point-mass transition has no density");
  return f.density(next.value(), e, current.value());
}

double TransitionFunction::sup_norm() const noexcept {
  if (const auto* t = as_table()) return *std::max_element(t->probs.begin(), t->probs.end());
  return std::get<Family>(kind_).sup_density;
}

TransitionFunction TransitionFunction::with_swapped_rows(std::size_t a, std::size_t b) const {
  const auto* t = as_table();
  if (t == nullptr) throw Error(ErrorCode::kInvalidArgument, "row swap needs a discrete table");
  if (a >= t->states || b >= t->states) throw Error(ErrorCode::kOutOfSupport, "row index out of range");
  std::vector<double> probs = t->probs;
  for (std::size_t e = 0; e < t->events; ++e) {
    for (std::size_t j = 0; j < t->states; ++j) {
      std::swap(probs[(a * t->events + e) * t->states + j], probs[(b * t->events + e) * t->states + j]);
    }
  }
  return table(t->states, t->events, std::move(probs));
}

}  // namespace hmpp
