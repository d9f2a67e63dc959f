#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hmpp/model.hpp"

namespace hmpp {

/// Minimum sample size for which the asymptotic KS constants are trusted.
inline constexpr std::size_t kMinReliableSample = 50;

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  std::size_t n = 0;
  double alpha = 0.01;
  bool pass = false;
  /// n >= kMinReliableSample.
  bool reliable = false;
};

/// Asymptotic Kolmogorov constant c(alpha): 1.63 at 0.01, 1.36 at 0.05,
/// otherwise solved from the limiting Kolmogorov distribution.
double ks_critical_constant(double alpha);

/// One-sample KS test against the Exp(1) CDF; pass iff D < c(alpha) / sqrt(n).
KsResult ks_exp1(std::span<const double> values, double alpha = 0.01);

struct ResidualSet {
  /// Compensator increments between consecutive events of each type.
  std::vector<std::vector<double>> per_type;
  std::vector<KsResult> per_type_ks;
  /// KS over all residuals together; the overall verdict.
  KsResult pooled;
  /// Every type has at least kMinReliableSample residuals.
  bool reliable = false;
  bool pass = false;
};

/// Time-rescaling residuals r = int weight(e) * lambda-bar(e | .) ds between
/// consecutive type-e events in (0, inf), evaluated exactly (closed form for
/// parametric kernels, adaptive quadrature for custom ones).
ResidualSet rescaled_residuals(const Trajectory& trajectory, const ModelSpec& model, double alpha = 0.01);

/// int_a^b weight(e) * lambda-bar(e | history before s) ds for 0 <= a <= b.
double compensator(const Trajectory& trajectory, const ModelSpec& model, std::size_t e, double a, double b);

struct TransitionCell {
  std::size_t state = 0;
  std::size_t event = 0;
  std::size_t n = 0;
  std::vector<std::size_t> observed;
  std::vector<double> expected;
  /// Chi-square over the bins left after pooling expected counts below 5.
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  bool pass = true;
  /// An observed transition has probability zero under phi.
  bool impossible = false;
};

struct TransitionTestReport {
  std::vector<TransitionCell> cells;
  /// Sum of the per-cell statistics and degrees of freedom; the overall verdict.
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  double alpha = 0.01;
  bool pass = true;
  /// Cells observed fewer than 5 times (reported, not tested).
  std::size_t skipped_cells = 0;
  std::size_t transitions = 0;
};

/// Chi-square test of observed (state before, event, state after) counts
/// against the rows of a discrete transition table.
TransitionTestReport transition_frequency_test(const Trajectory& trajectory, const TransitionFunction& phi,
                                               double alpha = 0.01);

/// Stationary law of the CTMC with generator
/// Q(x, x') = c(x) * sum_e weight(e) * share(e) * phi(x' | e, x), x' != x.
/// Empty shares/weights mean all ones. Throws ErrorCode::kSingularSystem for
/// reducible chains.
std::vector<double> ctmc_stationary_oracle(std::span<const double> rates, const TransitionFunction& phi,
                                           std::span<const double> shares = {},
                                           std::span<const double> weights = {});

/// Stationary mean of lambda-bar: solves m = nu + K^T m with
/// K(e', e) = weight(e') * int k-bar(t, e', e) dt. Throws
/// ErrorCode::kUnstableModel when the branching ratio is >= 1.
std::vector<double> hawkes_mean_rate_oracle(std::span<const double> nu, const Kernel& kernel,
                                            std::span<const double> weights, const StateSpace& states);

/// Fraction of (0, horizon] spent in each discrete state.
std::vector<double> state_occupancy(const Trajectory& trajectory, std::size_t states, double horizon);

struct CompoundPoissonReport {
  std::size_t runs = 0;
  double mean = 0.0;
  double variance = 0.0;
  double expected_mean = 0.0;
  double expected_variance = 0.0;
  /// (mean - expected_mean) / sqrt(expected_variance / runs)
  double mean_z = 0.0;
  double variance_relative_error = 0.0;
  bool mean_pass = false;
  bool variance_pass = false;
};

/// Compares X_T - X_0 across runs with the compound Poisson moments
/// nu T mu_J and nu T (sigma_J^2 + mu_J^2). The mean passes within 3 standard
/// errors, the variance within `variance_tolerance` relative error.
CompoundPoissonReport compound_poisson_check(std::span<const Trajectory> runs, double nu, double jump_mean,
                                             double jump_variance, double horizon,
                                             double variance_tolerance = 0.05);

}  // namespace hmpp
