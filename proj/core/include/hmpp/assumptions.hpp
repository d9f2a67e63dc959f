#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmpp/kernel.hpp"
#include "hmpp/model.hpp"
#include "hmpp/transition.hpp"

namespace hmpp {

enum class CheckStatus { kVerified, kVerifiedNumerically, kDeclaredByUser, kViolated, kNotChecked };

std::string_view to_string(CheckStatus status) noexcept;

struct AssumptionEntry {
  std::string id;
  CheckStatus status = CheckStatus::kNotChecked;
  /// Tolerance of a numerical verification.
  double tolerance = 0.0;
  std::string detail;
  /// Concrete counterexample when status == kViolated.
  std::string witness;
};

struct AssumptionReport {
  std::vector<AssumptionEntry> entries;
  std::optional<double> branching_ratio;
  std::optional<double> phi_sup;
  std::optional<double> summability_partial_sum;

  bool any_violated() const noexcept;
};

struct BranchingRatio {
  double rho = 0.0;
  /// Target event attaining the maximum.
  std::size_t argmax = 0;
  /// sum_{e'} weight(e') * integral of the state-maximized kernel, per target.
  std::vector<double> per_target;
};

/// rho = max_e sum_{e'} weight(e') * int_0^inf max_{x'} k(t, (e', x'), e) dt.
/// Closed form for Exponential and PowerLaw kernels, adaptive quadrature
/// (tolerance 1e-8) for Custom kernels. Throws ErrorCode::kDivergentIntegral
/// when a quadrature does not converge.
BranchingRatio branching_ratio(const Kernel& kernel, std::span<const double> weights,
                               const StateSpace& states);
/// Same quantity, always through quadrature.
BranchingRatio branching_ratio_quadrature(const Kernel& kernel, std::span<const double> weights,
                                          const StateSpace& states);

/// Verified iff rho * ||phi||_inf < 1.
AssumptionEntry check_corollary_constraint(const TransitionFunction& phi, double rho);
AssumptionEntry check_corollary_constraint(const TransitionFunction& phi, const Kernel& kernel,
                                           std::span<const double> weights, const StateSpace& states);

struct SummabilityReport {
  double partial_sum = 0.0;
  std::size_t terms = 0;
  /// Entry for non-decreasing a (witness: first n with a(n) < a(n-1)).
  AssumptionEntry monotonicity;
  /// Entry for divergence of sum 1/a(n): echoes the user declaration.
  AssumptionEntry divergence;
};

/// Sums 1 / a(n) for n = 0..n_max and checks monotonicity on that grid.
SummabilityReport summability_report(const std::function<double(std::size_t)>& a, std::size_t n_max,
                                     std::optional<bool> declared_divergent);

struct InitialConditionReport {
  AssumptionEntry finiteness;
  AssumptionEntry pathwise_bound;
  std::vector<double> grid;
  /// max_e sum over initial records of the state-maximized kernel, per grid time.
  std::vector<double> values;
};

/// Checks the initial condition against the dominating kernel on a
/// log-spaced grid of `points` times in (0, horizon].
InitialConditionReport initial_condition_check(const Trajectory& initial, const Kernel& kernel,
                                               const StateSpace& states, double horizon,
                                               std::size_t points = 64);

/// Runs every applicable check for the model.
AssumptionReport check_model(const ModelSpec& model, double horizon);

}  // namespace hmpp
