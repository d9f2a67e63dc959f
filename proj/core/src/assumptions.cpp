#include "hmpp/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hmpp/error.hpp"

namespace hmpp {

std::string_view to_string(CheckStatus status) noexcept {
  switch (status) {
    case CheckStatus::kVerified: return "Verified";
    case CheckStatus::kVerifiedNumerically: return "VerifiedNumerically";
    case CheckStatus::kDeclaredByUser: return "DeclaredByUser";
    case CheckStatus::kViolated: return "Violated";
    case CheckStatus::kNotChecked: return "NotChecked";
  }
  return "Unknown";
}

bool AssumptionReport::any_violated() const noexcept {
  return std::any_of(entries.begin(), entries.end(),
                     [](const AssumptionEntry& e) { return e.status == CheckStatus::kViolated; });
}

namespace {

constexpr double kQuadratureTolerance = 1e-8;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Mark source_mark(std::size_t event, std::size_t slot, const StateSpace& states) {
  return {event, states.is_discrete() ? StateValue::discrete(slot) : StateValue::continuous(0.0)};
}

// max over source states of k(lag, (source, x'), target)
double state_max_value(const Kernel& kernel, double lag, std::size_t source, std::size_t target,
                       const StateSpace& states) {
  double m = 0.0;
  for (std::size_t x = 0; x < states.slots(); ++x) {
    m = std::max(m, kernel(lag, source_mark(source, x, states), target, states));
  }
  return m;
}

double quadrature_integral(const Kernel& kernel, std::size_t source, std::size_t target,
                           const StateSpace& states) {
  auto f = [&](double t) { return state_max_value(kernel, t, source, target, states); };
  double error = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-2 * kQuadratureTolerance, &error, &l1);
  if (!std::isfinite(v) || !(error <= kQuadratureTolerance * std::max(1.0, std::abs(v)))) {
    throw Error(ErrorCode::kDivergentIntegral,
                "kernel integral from event " + std::to_string(source) + " to " +
                    std::to_string(target) + " does not converge");
  }
  return v;
}

BranchingRatio finish(std::vector<double> per_target) {
  BranchingRatio out;
  out.per_target = std::move(per_target);
  auto it = std::max_element(out.per_target.begin(), out.per_target.end());
  out.rho = *it;
  out.argmax = static_cast<std::size_t>(it - out.per_target.begin());
  return out;
}

void check_dims(const Kernel& kernel, std::span<const double> weights) {
  if (kernel.events() != weights.size()) {
    throw Error(ErrorCode::kInvalidArgument, "kernel and weights disagree on event count");
  }
}

}  // namespace

BranchingRatio branching_ratio(const Kernel& kernel, std::span<const double> weights,
                               const StateSpace& states) {
  check_dims(kernel, weights);
  if (kernel.as_custom()) return branching_ratio_quadrature(kernel, weights, states);
  const std::size_t d = weights.size();
  const KernelWeights& alpha =
      kernel.as_exponential() ? kernel.as_exponential()->alpha : kernel.as_power_law()->alpha;
  double shape = 1.0;
  if (const auto* p = kernel.as_power_law()) {
    shape = std::pow(p->cutoff, 1.0 - p->exponent) / (p->exponent - 1.0);
  }
  std::vector<double> per_target(d, 0.0);
  for (std::size_t e = 0; e < d; ++e) {
    for (std::size_t src = 0; src < d; ++src) per_target[e] += weights[src] * alpha.state_max(src, e) * shape;
  }
  return finish(std::move(per_target));
}

BranchingRatio branching_ratio_quadrature(const Kernel& kernel, std::span<const double> weights,
                                          const StateSpace& states) {
  check_dims(kernel, weights);
  const std::size_t d = weights.size();
  std::vector<double> per_target(d, 0.0);
  for (std::size_t e = 0; e < d; ++e) {
    for (std::size_t src = 0; src < d; ++src) {
      per_target[e] += weights[src] * quadrature_integral(kernel, src, e, states);
    }
  }
  return finish(std::move(per_target));
}

AssumptionEntry check_corollary_constraint(const TransitionFunction& phi, double rho) {
  AssumptionEntry entry{"corollary: rho * ||phi||_inf < 1", CheckStatus::kVerified, 0.0, {}, {}};
  const double sup = phi.sup_norm();
  entry.detail = "rho = " + fmt(rho) + ", ||phi||_inf = " + fmt(sup);
  if (rho == 0.0 && std::isfinite(sup)) return entry;
  const double product = rho * sup;
  if (!(product < 1.0)) {
    entry.status = CheckStatus::kViolated;
    entry.witness = "rho * ||phi||_inf = " + fmt(product);
  }
  return entry;
}

AssumptionEntry check_corollary_constraint(const TransitionFunction& phi, const Kernel& kernel,
                                           std::span<const double> weights, const StateSpace& states) {
  return check_corollary_constraint(phi, branching_ratio(kernel, weights, states).rho);
}

SummabilityReport summability_report(const std::function<double(std::size_t)>& a, std::size_t n_max,
                                     std::optional<bool> declared_divergent) {
  SummabilityReport out;
  out.monotonicity = {"B: a non-decreasing", CheckStatus::kVerifiedNumerically, 0.0,
                      "checked on n = 0.." + std::to_string(n_max), {}};
  double prev = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double v = a(n);
    if (!(v > 0.0) || !std::isfinite(v)) {
      out.monotonicity.status = CheckStatus::kViolated;
      out.monotonicity.witness = "a(" + std::to_string(n) + ") = " + fmt(v) + " is not positive";
    } else {
      if (n > 0 && v < prev && out.monotonicity.status != CheckStatus::kViolated) {
        out.monotonicity.status = CheckStatus::kViolated;
        out.monotonicity.witness = "n = " + std::to_string(n) + ": a(" + std::to_string(n) + ") = " +
                                   fmt(v) + " < a(" + std::to_string(n - 1) + ") = " + fmt(prev);
      }
      out.partial_sum += 1.0 / v;
    }
    prev = v;
  }
  out.terms = n_max + 1;

  out.divergence.id = "B(ii): sum 1/a(n) diverges";
  const std::string partial = "partial sum up to n = " + std::to_string(n_max) + " is " + fmt(out.partial_sum);
  if (!declared_divergent) {
    out.divergence.status = CheckStatus::kNotChecked;
    out.divergence.detail = "divergence undeclared; " + partial;
  } else if (*declared_divergent) {
    out.divergence.status = CheckStatus::kDeclaredByUser;
    out.divergence.detail = "declared divergent; " + partial;
  } else {
    out.divergence.status = CheckStatus::kViolated;
    out.divergence.detail = "declared convergent: explosion is possible; " + partial;
    out.divergence.witness = "series declared convergent, " + partial;
  }
  return out;
}

InitialConditionReport initial_condition_check(const Trajectory& initial, const Kernel& kernel,
                                               const StateSpace& states, double horizon,
                                               std::size_t points) {
  if (!(horizon > 0.0) || points < 2) {
    throw Error(ErrorCode::kInvalidArgument, "initial-condition grid needs horizon > 0 and 2+ points");
  }
  InitialConditionReport out;
  const auto records = initial.records();
  out.finiteness = {"C: finitely many initial records", CheckStatus::kVerified, 0.0,
                    std::to_string(records.size()) + " records", {}};
  out.pathwise_bound = {"E(ii): pathwise initial excitation finite", CheckStatus::kVerified, 0.0, {}, {}};

  if (const auto* c = kernel.as_custom()) {
    for (const auto& r : records) {
      for (double lag : c->singular_lags) {
        const double t = r.time + lag;
        if (t >= 0.0 && t <= horizon) {
          out.pathwise_bound.status = CheckStatus::kViolated;
          out.pathwise_bound.witness =
              t == 0.0 ? "t -> 0+ (record at " + fmt(r.time) + ")" : "t = " + fmt(t);
          return out;
        }
      }
    }
  }

  const double lo = horizon * 1e-6;
  const std::size_t d = kernel.events();
  for (std::size_t k = 0; k < points; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(points - 1);
    const double t = k + 1 == points ? horizon : lo * std::pow(horizon / lo, frac);
    double worst = 0.0;
    for (std::size_t e = 0; e < d; ++e) {
      double sum = 0.0;
      for (const auto& r : records) sum += state_max_value(kernel, t - r.time, r.mark.event, e, states);
      worst = std::max(worst, sum);
    }
    out.grid.push_back(t);
    out.values.push_back(worst);
    if (!std::isfinite(worst) && out.pathwise_bound.status != CheckStatus::kViolated) {
      out.pathwise_bound.status = CheckStatus::kViolated;
      out.pathwise_bound.witness = "t = " + fmt(t);
    }
  }
  out.pathwise_bound.detail = "max over grid = " + fmt(*std::max_element(out.values.begin(), out.values.end())) +
                              " on " + std::to_string(points) + " log-spaced points in (0, " + fmt(horizon) + "]";
  return out;
}

AssumptionReport check_model(const ModelSpec& model, double horizon) {
  model.validate();
  AssumptionReport report;
  auto& entries = report.entries;
  entries.push_back({"A: finite reference measure", CheckStatus::kVerified, 0.0,
                     "total event mass " + fmt(model.events.total_mass()) +
                         (model.states.is_discrete() ? ", " + std::to_string(model.states.size()) + " states"
                                                     : ", continuous state space"),
                     {}});
  const double sup = model.transition.sup_norm();
  report.phi_sup = sup;
  if (std::isfinite(sup)) {
    entries.push_back({"phi bounded", CheckStatus::kVerified, 0.0, "||phi||_inf = " + fmt(sup), {}});
  } else {
    entries.push_back({"phi bounded", CheckStatus::kNotChecked, 0.0,
                       "transition has a point mass, ||phi||_inf is infinite", {}});
  }

  const auto& f = model.functional;
  if (const auto* h = f.as_hawkes()) {
    const Kernel& k = h->kernel;
    entries.push_back({"D(i): dominated by a Hawkes functional", CheckStatus::kVerified, 0.0,
                       "dominating kernel is the state-wise maximum of k, lambda_0 = max base rate", {}});
    if (k.has_singularity()) {
      entries.push_back({"D(iii): kernel bounded pointwise", CheckStatus::kViolated, 0.0,
                         "custom kernel declares singular lags", "lag = " + fmt(k.as_custom()->singular_lags.front())});
    } else if (k.as_custom()) {
      entries.push_back({"D(iii): kernel bounded pointwise", CheckStatus::kDeclaredByUser, 0.0,
                         "custom kernel declares no singularity", {}});
    } else {
      entries.push_back({"D(iii): kernel bounded pointwise", CheckStatus::kVerified, 0.0,
                         "parametric kernel is finite for every lag", {}});
    }
    AssumptionEntry d2{"D(ii): branching ratio rho < 1", CheckStatus::kVerified, 0.0, {}, {}};
    try {
      const auto br = branching_ratio(k, model.events.weights(), model.states);
      report.branching_ratio = br.rho;
      if (k.as_custom()) {
        d2.status = CheckStatus::kVerifiedNumerically;
        d2.tolerance = kQuadratureTolerance;
      }
      d2.detail = "rho = " + fmt(br.rho) + " (attained at target event " + std::to_string(br.argmax) + ")";
      if (!(br.rho < 1.0)) {
        d2.status = CheckStatus::kViolated;
        d2.witness = "target event " + std::to_string(br.argmax) + ": rho = " + fmt(br.rho);
      }
      entries.push_back(d2);
      entries.push_back(check_corollary_constraint(model.transition, br.rho));
    } catch (const Error& e) {
      d2.status = CheckStatus::kViolated;
      d2.detail = e.what();
      d2.witness = "kernel integral diverges";
      entries.push_back(d2);
    }
    entries.push_back({"E(i): initial excitation bounded in expectation", CheckStatus::kNotChecked, 0.0,
                       "requires the law of the initial condition; only the stored realization is available",
                       {}});
    auto ic = initial_condition_check(model.initial, k, model.states, horizon);
    entries.push_back(ic.finiteness);
    entries.push_back(ic.pathwise_bound);
    return report;
  }

  // Count-dominated scenario. Constant and discrete Markov functionals are
  // bounded, so a constant a(n) dominates them.
  if (const auto* n = f.as_count()) {
    entries.push_back({"B(i): intensity dominated by a(count)", CheckStatus::kVerified, 0.0,
                       "functional is a(count)" + (n->description.empty() ? "" : ": a(n) = " + n->description),
                       {}});
    auto s = summability_report(n->a, 1'000'000, n->declared_divergent);
    report.summability_partial_sum = s.partial_sum;
    entries.push_back(s.monotonicity);
    entries.push_back(s.divergence);
  } else {
    double bound = std::numeric_limits<double>::infinity();
    if (const auto* c = f.as_constant()) {
      bound = *std::max_element(c->rates.begin(), c->rates.end());
    } else if (const auto* m = f.as_markov(); m && !m->state_rates.empty()) {
      bound = *std::max_element(m->state_rates.begin(), m->state_rates.end()) *
              *std::max_element(m->shares.begin(), m->shares.end());
    }
    if (std::isfinite(bound)) {
      entries.push_back({"B(i): intensity dominated by a(count)", CheckStatus::kVerified, 0.0,
                         "bounded functional, a(n) = " + fmt(bound), {}});
      entries.push_back({"B(ii): sum 1/a(n) diverges", CheckStatus::kVerified, 0.0,
                         "constant a(n) gives a divergent series", {}});
    } else {
      entries.push_back({"B(i): intensity dominated by a(count)", CheckStatus::kNotChecked, 0.0,
                         "rate function bound is not declared", {}});
    }
  }
  entries.push_back({"C: finitely many initial records", CheckStatus::kVerified, 0.0,
                     std::to_string(model.initial.records().size()) + " records", {}});
  return report;
}

}  // namespace hmpp
