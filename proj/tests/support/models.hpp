#pragma once

#include <cstdint>
#include <vector>

#include "hmpp/model.hpp"
#include "hmpp/rng.hpp"

namespace hmpp::testing {

inline ModelSpec poisson_model(double rate) {
  ModelSpec m;
  m.events = EventSpace(1);
  m.states = StateSpace::discrete(1);
  m.transition = TransitionFunction::identity(1, 1);
  m.functional = EventFunctional::constant({rate});
  m.initial = Trajectory({}, {}, StateValue::discrete(0));
  return m;
}

inline ModelSpec hawkes_1d(double nu, double alpha, double beta) {
  ModelSpec m = poisson_model(nu);
  m.functional = EventFunctional::hawkes({nu}, Kernel::exponential(KernelWeights(1, 1, alpha), beta));
  return m;
}

inline ModelSpec ctmc_model(std::vector<double> rates, std::vector<double> table) {
  const std::size_t n = rates.size();
  ModelSpec m;
  m.events = EventSpace(1);
  m.states = StateSpace::discrete(n);
  m.transition = TransitionFunction::table(n, 1, std::move(table));
  m.functional = EventFunctional::markov(std::move(rates), {1.0});
  m.initial = Trajectory({}, {}, StateValue::discrete(0));
  return m;
}

/// 2 events, 2 states, exponential kernel depending on the source state.
inline ModelSpec state_hawkes_model() {
  ModelSpec m;
  m.events = EventSpace(2);
  m.states = StateSpace::discrete(2);
  m.transition = TransitionFunction::table(2, 2, {0.7, 0.3, 0.2, 0.8, 0.4, 0.6, 0.9, 0.1});
  KernelWeights a(2, 2, {0.20, 0.10, 0.05, 0.15, 0.10, 0.05, 0.15, 0.20});
  m.functional = EventFunctional::hawkes({0.5, 0.4}, Kernel::exponential(a, 1.5));
  m.initial = Trajectory({}, {}, StateValue::discrete(0));
  return m;
}

/// Kernel k(s, x', e) independent of the source event, strictly positive,
/// with phi(0 | 0, 1) > phi(0 | 0, 0).
inline ModelSpec non_lipschitz_model() {
  ModelSpec m;
  m.events = EventSpace(2);
  m.states = StateSpace::discrete(2);
  m.transition = TransitionFunction::table(2, 2, {0.3, 0.7, 0.5, 0.5, 0.8, 0.2, 0.5, 0.5});
  KernelWeights a(2, 2, {0.1, 0.1, 0.3, 0.3, 0.1, 0.1, 0.3, 0.3});
  m.functional = EventFunctional::hawkes({0.6, 0.6}, Kernel::exponential(a, 2.0));
  m.initial = Trajectory({}, {}, StateValue::discrete(0));
  return m;
}

inline ModelSpec pure_birth_model() {
  ModelSpec m = poisson_model(1.0);
  m.functional = EventFunctional::count_power(1.0, 1.0, 2.0, 1);
  return m;
}

/// Hawkes model with every alpha entry replaced by its state-wise maximum.
inline ModelSpec state_maximized(const ModelSpec& model) {
  ModelSpec m = model;
  const auto* h = model.functional.as_hawkes();
  m.functional = EventFunctional::hawkes(h->base, h->kernel.state_maximized());
  return m;
}

/// A random small model: constant, Markov or Hawkes (exponential or power
/// law) with 1-3 events and 1-3 discrete states, subcritical.
inline ModelSpec random_model(Rng& rng) {
  const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
  const std::size_t nx = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
  std::vector<double> w(d);
  for (double& v : w) v = 0.5 + rng.uniform();
  ModelSpec m;
  m.events = EventSpace(w);
  m.states = StateSpace::discrete(nx);
  std::vector<double> probs;
  for (std::size_t i = 0; i < nx * d; ++i) {
    std::vector<double> row(nx);
    double s = 0.0;
    for (double& v : row) s += (v = rng.uniform() + 0.05);
    for (double v : row) probs.push_back(v / s);
  }
  m.transition = TransitionFunction::table(nx, d, probs);
  std::vector<double> base(d);
  for (double& v : base) v = 0.2 + rng.uniform();
  const double kind = rng.uniform();
  if (kind < 0.2) {
    m.functional = EventFunctional::constant(base);
  } else if (kind < 0.4) {
    std::vector<double> rates(nx);
    for (double& v : rates) v = 0.2 + 2.0 * rng.uniform();
    m.functional = EventFunctional::markov(rates, base);
  } else {
    // Scale so that rho <= 0.8 whatever the weights are.
    double wsum = 0.0;
    for (double v : w) wsum += v;
    KernelWeights a(d, nx, 0.0);
    for (std::size_t s = 0; s < d; ++s)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t t = 0; t < d; ++t) a.at(s, x, t) = 0.8 * rng.uniform() / wsum;
    if (kind < 0.8) {
      m.functional = EventFunctional::hawkes(base, Kernel::exponential(a, 0.5 + 2.0 * rng.uniform()));
    } else {
      // integral = alpha * c^(1-p) / (p-1) = alpha with c = 1, p = 2
      m.functional = EventFunctional::hawkes(base, Kernel::power_law(a, 2.0, 1.0));
    }
  }
  m.initial = Trajectory({}, {}, StateValue::discrete(0));
  return m;
}

}  // namespace hmpp::testing
