#include "hmpp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hmpp/error.hpp"

namespace hmpp {

KernelWeights::KernelWeights(std::size_t events, std::size_t state_slots, double fill)
    : KernelWeights(events, state_slots, std::vector<double>(events * state_slots * events, fill)) {}

KernelWeights::KernelWeights(std::size_t events, std::size_t state_slots, std::vector<double> values)
    : events_(events), slots_(state_slots), values_(std::move(values)) {
  if (events_ == 0 || slots_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "kernel weights need at least one event and state slot");
  }
  if (values_.size() != events_ * slots_ * events_) {
    throw Error(ErrorCode::kInvalidArgument, "kernel weight tensor has wrong size");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "kernel weights must be finite and non-negative");
    }
  }
}

double& KernelWeights::at(std::size_t source, std::size_t slot, std::size_t target) {
  return values_.at((source * slots_ + slot) * events_ + target);
}

double KernelWeights::at(std::size_t source, std::size_t slot, std::size_t target) const {
  return values_.at((source * slots_ + slot) * events_ + target);
}

double KernelWeights::state_max(std::size_t source, std::size_t target) const {
  double m = 0.0;
  for (std::size_t x = 0; x < slots_; ++x) m = std::max(m, at(source, x, target));
  return m;
}

Kernel Kernel::exponential(KernelWeights alpha, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::kInvalidArgument, "exponential kernel decay must be positive");
  }
  return Kernel(Exponential{std::move(alpha), beta});
}

Kernel Kernel::power_law(KernelWeights alpha, double exponent, double cutoff) {
  if (!(exponent > 1.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::kInvalidArgument, "power-law exponent must exceed 1");
  }
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
    throw Error(ErrorCode::kInvalidArgument, "power-law cutoff must be positive");
  }
  return Kernel(PowerLaw{std::move(alpha), exponent, cutoff});
}

Kernel Kernel::custom(Custom spec) {
  if (!spec.value) throw Error(ErrorCode::kInvalidArgument, "custom kernel needs a value function");
  if (spec.events == 0 || spec.state_slots == 0) {
    throw Error(ErrorCode::kInvalidArgument, "custom kernel needs event and state dimensions");
  }
  return Kernel(std::move(spec));
}

Kernel Kernel::zero(std::size_t events, std::size_t state_slots) {
  return exponential(KernelWeights(events, state_slots, 0.0), 1.0);
}

double Kernel::operator()(double lag, const Mark& source, std::size_t target,
                          const StateSpace& states) const {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Exponential>) {
          const double a = k.alpha.at(source.event, states.slot_of(source.state), target);
          return a == 0.0 ? 0.0 : a * k.beta * std::exp(-k.beta * lag);
        } else if constexpr (std::is_same_v<K, PowerLaw>) {
          const double a = k.alpha.at(source.event, states.slot_of(source.state), target);
          return a == 0.0 ? 0.0 : a * std::pow(lag + k.cutoff, -k.exponent);
        } else {
          return k.value(lag, source, target);
        }
      },
      kind_);
}

double Kernel::integral(const Mark& source, std::size_t target, const StateSpace& states) const {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Exponential>) {
          return k.alpha.at(source.event, states.slot_of(source.state), target);
        } else if constexpr (std::is_same_v<K, PowerLaw>) {
          const double a = k.alpha.at(source.event, states.slot_of(source.state), target);
          return a * std::pow(k.cutoff, 1.0 - k.exponent) / (k.exponent - 1.0);
        } else {
          if (!k.integral) {
            throw Error(ErrorCode::kDivergentIntegral, "custom kernel has no declared integral");
          }
          return k.integral(source, target);
        }
      },
      kind_);
}

double Kernel::integral(double lag_from, double lag_to, const Mark& source, std::size_t target,
                        const StateSpace& states) const {
  if (lag_to <= lag_from) return 0.0;
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Exponential>) {
          const double a = k.alpha.at(source.event, states.slot_of(source.state), target);
          if (a == 0.0) return 0.0;
          // exp(-b s0) - exp(-b s1) = exp(-b s0) * (1 - exp(-b (s1 - s0)))
          return a * std::exp(-k.beta * lag_from) * -std::expm1(-k.beta * (lag_to - lag_from));
        } else if constexpr (std::is_same_v<K, PowerLaw>) {
          const double a = k.alpha.at(source.event, states.slot_of(source.state), target);
          if (a == 0.0) return 0.0;
          const double q = 1.0 - k.exponent;
          return a * (std::pow(lag_from + k.cutoff, q) - std::pow(lag_to + k.cutoff, q)) /
                 (k.exponent - 1.0);
        } else {
          double error = 0.0;
          auto f = [&](double s) { return k.value(s, source, target); };
          const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
              f, lag_from, lag_to, 15, 1e-10, &error);
          if (!std::isfinite(v)) {
            throw Error(ErrorCode::kDivergentIntegral, "custom kernel integral is not finite");
          }
          return v;
        }
      },
      kind_);
}

double Kernel::sup_from(double lag, const Mark& source, std::size_t target,
                        const StateSpace& states) const {
  if (const auto* c = as_custom()) {
    if (!c->singular_lags.empty()) {
      throw Error(ErrorCode::kNoValidBound, "custom kernel declares a singularity");
    }
    if (c->non_increasing) return c->value(lag, source, target);
    if (!c->envelope) {
      throw Error(ErrorCode::kNoValidBound, "non-monotone custom kernel lacks a declared envelope");
    }
    return c->envelope(lag, source, target);
  }
  return (*this)(lag, source, target, states);
}

bool Kernel::non_increasing() const noexcept {
  if (const auto* c = as_custom()) return c->non_increasing;
  return true;
}

bool Kernel::has_singularity() const noexcept {
  if (const auto* c = as_custom()) return !c->singular_lags.empty();
  return false;
}

std::size_t Kernel::events() const noexcept {
  return std::visit(
      [](const auto& k) -> std::size_t {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Custom>) {
          return k.events;
        } else {
          return k.alpha.events();
        }
      },
      kind_);
}

std::size_t Kernel::state_slots() const noexcept {
  return std::visit(
      [](const auto& k) -> std::size_t {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Custom>) {
          return k.state_slots;
        } else {
          return k.alpha.state_slots();
        }
      },
      kind_);
}

namespace {

KernelWeights maximize_states(const KernelWeights& alpha) {
  KernelWeights out(alpha.events(), alpha.state_slots(), 0.0);
  for (std::size_t src = 0; src < alpha.events(); ++src) {
    for (std::size_t tgt = 0; tgt < alpha.events(); ++tgt) {
      const double m = alpha.state_max(src, tgt);
      for (std::size_t x = 0; x < alpha.state_slots(); ++x) out.at(src, x, tgt) = m;
    }
  }
  return out;
}

}  // namespace

Kernel Kernel::state_maximized() const {
  if (const auto* e = as_exponential()) return exponential(maximize_states(e->alpha), e->beta);
  if (const auto* p = as_power_law()) {
    return power_law(maximize_states(p->alpha), p->exponent, p->cutoff);
  }
  throw Error(ErrorCode::kInvalidArgument, "state maximization needs a parametric kernel");
}

}  // namespace hmpp
