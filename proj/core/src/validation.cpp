#include "hmpp/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "hmpp/assumptions.hpp"
#include "hmpp/error.hpp"
#include "hmpp/intensity_tracker.hpp"

namespace hmpp {

namespace {

constexpr double kMinExpected = 5.0;

// P(K > c) for the limiting Kolmogorov distribution.
double kolmogorov_tail(double c) {
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * c * c);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

ModelSpec with_initial(const ModelSpec& model, const Trajectory& trajectory) {
  ModelSpec m = model;
  std::vector<EventRecord> initial(trajectory.initial().begin(), trajectory.initial().end());
  m.initial = Trajectory(std::move(initial), {}, trajectory.origin_state());
  return m;
}

StateValue state_at_zero(const Trajectory& t) {
  return t.initial().empty() ? t.origin_state() : t.initial().back().mark.state;
}

}  // namespace

double ks_critical_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  if (alpha == 0.01) return 1.63;
  if (alpha == 0.05) return 1.36;
  double lo = 0.2;
  double hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_tail(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

KsResult ks_exp1(std::span<const double> values, double alpha) {
  KsResult r;
  r.alpha = alpha;
  r.n = values.size();
  r.reliable = r.n >= kMinReliableSample;
  const double c = ks_critical_constant(alpha);
  if (r.n == 0) {
    r.critical = std::numeric_limits<double>::infinity();
    r.pass = true;
    return r;
  }
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(r.n);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = x[i] <= 0.0 ? 0.0 : -std::expm1(-x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  r.statistic = d;
  r.critical = c / std::sqrt(n);
  r.pass = d < r.critical;
  return r;
}

ResidualSet rescaled_residuals(const Trajectory& trajectory, const ModelSpec& model, double alpha) {
  const ModelSpec m = with_initial(model, trajectory);
  const std::size_t d = m.events.size();
  IntensityTracker tracker(m);
  std::vector<double> acc(d, 0.0);
  std::vector<bool> seen(d, false);
  ResidualSet out;
  out.per_type.assign(d, {});

  double prev = 0.0;
  for (const EventRecord& r : trajectory.events()) {
    if (r.mark.event >= d) throw Error(ErrorCode::kInvalidArgument, "event index out of range");
    for (std::size_t e = 0; e < d; ++e) {
      acc[e] += m.events.weight(e) * tracker.integral(e, prev, r.time);
    }
    const std::size_t e = r.mark.event;
    if (seen[e]) out.per_type[e].push_back(acc[e]);
    seen[e] = true;
    acc[e] = 0.0;
    tracker.push(r);
    prev = r.time;
  }

  std::vector<double> pooled;
  out.reliable = true;
  for (std::size_t e = 0; e < d; ++e) {
    out.per_type_ks.push_back(ks_exp1(out.per_type[e], alpha));
    out.reliable = out.reliable && out.per_type_ks.back().reliable;
    pooled.insert(pooled.end(), out.per_type[e].begin(), out.per_type[e].end());
  }
  out.pooled = ks_exp1(pooled, alpha);
  out.pass = out.pooled.pass;
  return out;
}

double compensator(const Trajectory& trajectory, const ModelSpec& model, std::size_t e, double a, double b) {
  if (!(a >= 0.0 && a <= b)) throw Error(ErrorCode::kInvalidArgument, "compensator needs 0 <= a <= b");
  const ModelSpec m = with_initial(model, trajectory);
  if (e >= m.events.size()) throw Error(ErrorCode::kInvalidArgument, "event index out of range");
  IntensityTracker tracker(m);
  double total = 0.0;
  double prev = 0.0;
  auto add = [&](double hi) {
    const double lo = std::max(prev, a);
    const double up = std::min(hi, b);
    if (up > lo) total += tracker.integral(e, lo, up);
  };
  for (const EventRecord& r : trajectory.events()) {
    if (prev >= b) break;
    add(r.time);
    tracker.push(r);
    prev = r.time;
  }
  if (prev < b) add(b);
  return m.events.weight(e) * total;
}

TransitionTestReport transition_frequency_test(const Trajectory& trajectory, const TransitionFunction& phi,
                                               double alpha) {
  const auto* table = phi.as_table();
  if (table == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "transition frequency test needs a discrete transition table");
  }
  const std::size_t nx = table->states;
  const std::size_t ne = table->events;
  std::vector<std::size_t> counts(nx * ne * nx, 0);
  auto idx = [&](std::size_t x, std::size_t e, std::size_t y) { return (x * ne + e) * nx + y; };

  TransitionTestReport rep;
  rep.alpha = alpha;
  StateValue current = state_at_zero(trajectory);
  for (const EventRecord& r : trajectory.events()) {
    const std::size_t x = current.index();
    const std::size_t y = r.mark.state.index();
    if (x >= nx || y >= nx || r.mark.event >= ne) {
      throw Error(ErrorCode::kOutOfSupport, "trajectory leaves the transition table's range");
    }
    ++counts[idx(x, r.mark.event, y)];
    ++rep.transitions;
    current = r.mark.state;
  }

  bool impossible = false;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t e = 0; e < ne; ++e) {
      TransitionCell cell;
      cell.state = x;
      cell.event = e;
      for (std::size_t y = 0; y < nx; ++y) {
        cell.observed.push_back(counts[idx(x, e, y)]);
        cell.n += counts[idx(x, e, y)];
      }
      if (cell.n == 0) continue;
      const double n = static_cast<double>(cell.n);
      for (std::size_t y = 0; y < nx; ++y) cell.expected.push_back(n * phi.row_probability(x, e, y));
      if (cell.n < kMinExpected) {
        ++rep.skipped_cells;
        rep.cells.push_back(std::move(cell));
        continue;
      }

      // Bins with positive probability; small ones are merged.
      std::vector<std::pair<double, double>> bins;  // (observed, expected)
      std::pair<double, double> small{0.0, 0.0};
      for (std::size_t y = 0; y < nx; ++y) {
        const double o = static_cast<double>(cell.observed[y]);
        const double ex = cell.expected[y];
        if (ex <= 0.0) {
          if (o > 0.0) cell.impossible = true;
          continue;
        }
        if (ex < kMinExpected) {
          small.first += o;
          small.second += ex;
        } else {
          bins.emplace_back(o, ex);
        }
      }
      if (small.second > 0.0) {
        if (small.second < kMinExpected && !bins.empty()) {
          auto it = std::min_element(bins.begin(), bins.end(),
                                     [](const auto& l, const auto& r) { return l.second < r.second; });
          it->first += small.first;
          it->second += small.second;
        } else {
          bins.push_back(small);
        }
      }
      if (cell.impossible) {
        impossible = true;
        cell.statistic = std::numeric_limits<double>::infinity();
        cell.p_value = 0.0;
        cell.pass = false;
      } else if (bins.size() > 1) {
        for (const auto& [o, ex] : bins) cell.statistic += (o - ex) * (o - ex) / ex;
        cell.dof = bins.size() - 1;
        boost::math::chi_squared_distribution<double> dist(static_cast<double>(cell.dof));
        cell.p_value = boost::math::cdf(boost::math::complement(dist, cell.statistic));
        cell.pass = cell.p_value >= alpha;
      }
      rep.statistic += cell.statistic;
      rep.dof += cell.dof;
      rep.cells.push_back(std::move(cell));
    }
  }
  if (impossible) {
    rep.statistic = std::numeric_limits<double>::infinity();
    rep.p_value = 0.0;
    rep.pass = false;
  } else if (rep.dof > 0) {
    boost::math::chi_squared_distribution<double> dist(static_cast<double>(rep.dof));
    rep.p_value = boost::math::cdf(boost::math::complement(dist, rep.statistic));
    rep.pass = rep.p_value >= alpha;
  }
  return rep;
}

std::vector<double> ctmc_stationary_oracle(std::span<const double> rates, const TransitionFunction& phi,
                                           std::span<const double> shares, std::span<const double> weights) {
  const auto* table = phi.as_table();
  if (table == nullptr) throw Error(ErrorCode::kInvalidArgument, "CTMC oracle needs a discrete transition table");
  const std::size_t n = table->states;
  const std::size_t ne = table->events;
  if (rates.size() != n) throw Error(ErrorCode::kInvalidArgument, "one rate per state is required");
  if ((!shares.empty() && shares.size() != ne) || (!weights.empty() && weights.size() != ne)) {
    throw Error(ErrorCode::kInvalidArgument, "shares and weights need one entry per event");
  }

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t e = 0; e < ne; ++e) {
      const double s = (shares.empty() ? 1.0 : shares[e]) * (weights.empty() ? 1.0 : weights[e]);
      for (std::size_t y = 0; y < n; ++y) {
        if (y != x) q(x, y) += rates[x] * s * phi.row_probability(x, e, y);
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) q(x, x) = -q.row(x).sum();

  auto reaches_all = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        const double rate = forward ? q(u, v) : q(v, u);
        if (v != u && rate > 0.0 && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  if (!reaches_all(true) || !reaches_all(false)) {
    throw Error(ErrorCode::kSingularSystem, "generator is reducible; the stationary law is not unique");
  }

  Eigen::MatrixXd a = q.transpose();
  a.row(static_cast<Eigen::Index>(n) - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  b(static_cast<Eigen::Index>(n) - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw Error(ErrorCode::kSingularSystem, "stationary system is singular");
  const Eigen::VectorXd pi = lu.solve(b);
  return {pi.data(), pi.data() + pi.size()};
}

std::vector<double> hawkes_mean_rate_oracle(std::span<const double> nu, const Kernel& kernel,
                                            std::span<const double> weights, const StateSpace& states) {
  const std::size_t d = kernel.events();
  if (nu.size() != d || weights.size() != d) {
    throw Error(ErrorCode::kInvalidArgument, "nu, weights and kernel disagree on event count");
  }
  const BranchingRatio br = branching_ratio(kernel, weights, states);
  if (br.rho >= 1.0) {
    throw Error(ErrorCode::kUnstableModel, "branching ratio " + std::to_string(br.rho) + " >= 1");
  }
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd k(n, n);
  std::vector<double> single(d, 0.0);
  for (std::size_t src = 0; src < d; ++src) {
    std::fill(single.begin(), single.end(), 0.0);
    single[src] = weights[src];
    const BranchingRatio row = branching_ratio(kernel, single, states);
    for (std::size_t tgt = 0; tgt < d; ++tgt) {
      k(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(tgt)) = row.per_target[tgt];
    }
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - k.transpose();
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(nu.data(), n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw Error(ErrorCode::kSingularSystem, "mean-rate system is singular");
  const Eigen::VectorXd m = lu.solve(rhs);
  return {m.data(), m.data() + m.size()};
}

std::vector<double> state_occupancy(const Trajectory& trajectory, std::size_t states, double horizon) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "horizon must be positive");
  std::vector<double> occ(states, 0.0);
  StateValue current = state_at_zero(trajectory);
  double prev = 0.0;
  for (const EventRecord& r : trajectory.events()) {
    if (r.time > horizon) break;
    occ.at(current.index()) += r.time - prev;
    prev = r.time;
    current = r.mark.state;
  }
  occ.at(current.index()) += horizon - prev;
  for (double& v : occ) v /= horizon;
  return occ;
}

CompoundPoissonReport compound_poisson_check(std::span<const Trajectory> runs, double nu, double jump_mean,
                                             double jump_variance, double horizon, double variance_tolerance) {
  if (runs.size() < 2) throw Error(ErrorCode::kInvalidArgument, "compound Poisson check needs 2+ runs");
  CompoundPoissonReport rep;
  rep.runs = runs.size();
  std::vector<double> inc;
  inc.reserve(runs.size());
  for (const Trajectory& t : runs) {
    double end = state_at_zero(t).value();
    for (const EventRecord& r : t.events()) {
      if (r.time > horizon) break;
      end = r.mark.state.value();
    }
    inc.push_back(end - state_at_zero(t).value());
  }
  const double n = static_cast<double>(inc.size());
  rep.mean = std::accumulate(inc.begin(), inc.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : inc) ss += (v - rep.mean) * (v - rep.mean);
  rep.variance = ss / (n - 1.0);
  rep.expected_mean = nu * horizon * jump_mean;
  rep.expected_variance = nu * horizon * (jump_variance + jump_mean * jump_mean);
  rep.mean_z = (rep.mean - rep.expected_mean) / std::sqrt(rep.expected_variance / n);
  rep.variance_relative_error = std::abs(rep.variance - rep.expected_variance) / rep.expected_variance;
  rep.mean_pass = std::abs(rep.mean_z) <= 3.0;
  rep.variance_pass = rep.variance_relative_error <= variance_tolerance;
  return rep;
}

}  // namespace hmpp
