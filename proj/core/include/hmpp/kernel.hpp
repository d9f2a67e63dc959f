#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "hmpp/types.hpp"

namespace hmpp {

/// Non-negative excitation weights indexed [source event][source state slot][target event].
class KernelWeights {
 public:
  KernelWeights() = default;
  KernelWeights(std::size_t events, std::size_t state_slots, double fill = 0.0);
  KernelWeights(std::size_t events, std::size_t state_slots, std::vector<double> values);

  std::size_t events() const noexcept { return events_; }
  std::size_t state_slots() const noexcept { return slots_; }

  double& at(std::size_t source, std::size_t slot, std::size_t target);
  double at(std::size_t source, std::size_t slot, std::size_t target) const;
  /// max over source states of at(source, ., target).
  double state_max(std::size_t source, std::size_t target) const;

  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t events_ = 0;
  std::size_t slots_ = 0;
  std::vector<double> values_;
};

/// Excitation kernel k(lag, source mark, target event) of a state-dependent
/// Hawkes functional.
class Kernel {
 public:
  /// k(s) = alpha * beta * exp(-beta s); integrates to alpha.
  struct Exponential {
    KernelWeights alpha;
    double beta = 1.0;
  };
  /// k(s) = alpha * (s + cutoff)^(-exponent); integrates to
  /// alpha * cutoff^(1 - exponent) / (exponent - 1).
  struct PowerLaw {
    KernelWeights alpha;
    double exponent = 2.0;
    double cutoff = 1.0;
  };
  /// User-supplied kernel. `integral` is the declared time integral over
  /// (0, inf) for each (source mark, target). `envelope(lag, m, e)` must return
  /// sup_{s >= lag} k(s, m, e) and is required when the kernel is not
  /// non-increasing in the lag. `singular_lags` lists lags where k diverges.
  struct Custom {
    std::function<double(double lag, const Mark& source, std::size_t target)> value;
    std::function<double(const Mark& source, std::size_t target)> integral;
    std::function<double(double lag, const Mark& source, std::size_t target)> envelope;
    bool non_increasing = false;
    std::vector<double> singular_lags;
    std::size_t events = 1;
    std::size_t state_slots = 1;
  };

  static Kernel exponential(KernelWeights alpha, double beta);
  static Kernel power_law(KernelWeights alpha, double exponent, double cutoff);
  static Kernel custom(Custom spec);
  static Kernel zero(std::size_t events, std::size_t state_slots);

  double operator()(double lag, const Mark& source, std::size_t target,
                    const StateSpace& states) const;
  /// Declared integral of k(., source, target) over (0, inf).
  double integral(const Mark& source, std::size_t target, const StateSpace& states) const;
  /// Integral of k(., source, target) over [lag_from, lag_to].
  double integral(double lag_from, double lag_to, const Mark& source, std::size_t target,
                  const StateSpace& states) const;
  /// sup_{s >= lag} k(s, source, target). Throws ErrorCode::kNoValidBound for
  /// custom kernels that are neither non-increasing nor carry an envelope.
  double sup_from(double lag, const Mark& source, std::size_t target,
                  const StateSpace& states) const;

  bool non_increasing() const noexcept;
  bool has_singularity() const noexcept;
  std::size_t events() const noexcept;
  std::size_t state_slots() const noexcept;

  const Exponential* as_exponential() const noexcept { return std::get_if<Exponential>(&kind_); }
  const PowerLaw* as_power_law() const noexcept { return std::get_if<PowerLaw>(&kind_); }
  const Custom* as_custom() const noexcept { return std::get_if<Custom>(&kind_); }

  /// Kernel of the same shape with alpha replaced by its state-wise maximum
  /// (identical for every source state). Only defined for Exponential and
  /// PowerLaw kernels.
  Kernel state_maximized() const;

 private:
  using Kind = std::variant<Exponential, PowerLaw, Custom>;
  explicit Kernel(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

}  // namespace hmpp
