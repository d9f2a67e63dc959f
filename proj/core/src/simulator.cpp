#include "hmpp/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "hmpp/driver.hpp"
#include "hmpp/intensity_tracker.hpp"

namespace hmpp {

std::string_view to_string(SimStatus status) noexcept {
  switch (status) {
    case SimStatus::kCompleted: return "Completed";
    case SimStatus::kExplosionSuspected: return "ExplosionSuspected";
    case SimStatus::kCandidateBudgetExhausted: return "CandidateBudgetExhausted";
  }
  return "Unknown";
}

std::optional<SimStatus> parse_sim_status(std::string_view text) noexcept {
  for (auto s : {SimStatus::kCompleted, SimStatus::kExplosionSuspected,
                 SimStatus::kCandidateBudgetExhausted}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

DominationBreach::DominationBreach(const EventRecord& offending, std::uint64_t seed)
    : Error(ErrorCode::kDominationBreach,
            "seed " + std::to_string(seed) + ": event of type " + std::to_string(offending.mark.event) +
                " at time " + std::to_string(offending.time) +
                " accepted by the dominated process but not by the dominating one"),
      offending_(offending),
      seed_(seed) {}

namespace {

using Clock = std::chrono::steady_clock;

void check_config(const SimConfig& config) {
  if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
    throw Error(ErrorCode::kInvalidArgument, "horizon must be positive and finite");
  }
  if (config.max_events == 0 || config.max_candidates == 0) {
    throw Error(ErrorCode::kInvalidArgument, "event and candidate caps must be positive");
  }
}

// One process consuming a candidate stream: tracker, majorant and output.
struct Consumer {
  Consumer(const ModelSpec& m, Rng marks)
      : model(m), tracker(m), marks(std::move(marks)), bounds(m.events.size()) {
    tracker.bounds(bounds);
    diagnostics.per_type_counts.assign(m.events.size(), 0);
  }

  double threshold(const Candidate& c) const {
    const double lambda = tracker.intensity(c.event, c.time);
    if (lambda > bounds[c.event]) {
      throw Error(ErrorCode::kMajorantViolation,
                  "intensity " + std::to_string(lambda) + " of event type " + std::to_string(c.event) +
                      " exceeds its majorant " + std::to_string(bounds[c.event]) + " at time " +
                      std::to_string(c.time));
    }
    return model.events.weight(c.event) * lambda;
  }

  EventRecord make_record(const Candidate& c) {
    return {c.time, {c.event, model.transition.sample(c.event, tracker.state(), marks)}};
  }

  void accept(const EventRecord& r) {
    tracker.push(r);
    tracker.bounds(bounds);
    events.push_back(r);
    ++diagnostics.per_type_counts[r.mark.event];
    ++diagnostics.accepted;
  }

  SimResult finish(double horizon, SimStatus status, Clock::time_point start) {
    SimResult out;
    out.status = status;
    out.diagnostics = std::move(diagnostics);
    auto& d = out.diagnostics;
    d.acceptance_rate = d.candidates == 0 ? 0.0 : static_cast<double>(d.accepted) / d.candidates;
    d.final_intensity.resize(bounds.size());
    const double end = status == SimStatus::kCompleted ? horizon : tracker.anchor();
    for (std::size_t e = 0; e < bounds.size(); ++e) {
      d.final_intensity[e] = end > tracker.anchor() ? tracker.intensity(e, end) : bounds[e];
    }
    auto initial = model.initial.records();
    out.trajectory = Trajectory({initial.begin(), initial.end()}, std::move(events),
                                model.initial.origin_state());
    d.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  }

  const ModelSpec& model;
  IntensityTracker tracker;
  Rng marks;
  std::vector<double> bounds;
  std::vector<EventRecord> events;
  SimDiagnostics diagnostics;
};

// Draws the next candidate; returns false when the stream has ended (zero
// majorant) and flags exhausted time resolution.
template <typename Source, typename... Bounds>
bool draw(Source& source, Candidate& out, bool& resolution_exhausted, std::span<const double> weights,
          const Bounds&... bounds) {
  try {
    out = source.next_candidate(std::span<const double>(bounds)..., weights);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kZeroMajorant) return false;
    if (e.code() == ErrorCode::kTimeResolutionExhausted) {
      resolution_exhausted = true;
      return false;
    }
    throw;
  }
}

bool spot_check_domination(const ModelSpec& model, const ModelSpec& dominating, std::uint64_t seed) {
  Rng rng(seed, 2);
  const std::size_t d = model.events.size();
  auto random_state = [&]() {
    if (model.states.is_discrete()) {
      return StateValue::discrete(static_cast<std::size_t>(rng.uniform() * model.states.size()));
    }
    return StateValue::continuous(rng.normal());
  };
  auto init = model.initial.records();
  for (int trial = 0; trial < 32; ++trial) {
    std::vector<EventRecord> records(init.begin(), init.end());
    double t = 0.0;
    const int n = trial == 0 ? 0 : 1 + static_cast<int>(rng.uniform() * 20);
    for (int i = 0; i < n; ++i) {
      t += 0.05 + rng.exponential(2.0);
      records.push_back({t, {std::min(d - 1, static_cast<std::size_t>(rng.uniform() * d)), random_state()}});
    }
    const double cut = t + 0.01 + rng.exponential(1.0);
    const HistoryView h(records, cut, model.initial.origin_state());
    for (std::size_t e = 0; e < d; ++e) {
      if (event_intensity(model.functional, e, h, model.states) >
          event_intensity(dominating.functional, e, h, dominating.states)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

SimResult simulate(const ModelSpec& model, const SimConfig& config) {
  const auto start = Clock::now();
  model.validate();
  check_config(config);

  Driver driver(config.seed);
  Consumer proc(model, driver.mark_stream());
  const auto weights = model.events.weights();
  SimStatus status = SimStatus::kCompleted;

  Candidate c;
  while (draw(driver, c, proc.diagnostics.time_resolution_exhausted, weights, proc.bounds)) {
    if (c.time > config.horizon) break;
    if (proc.diagnostics.candidates == config.max_candidates) {
      status = SimStatus::kCandidateBudgetExhausted;
      break;
    }
    ++proc.diagnostics.candidates;
    const double threshold = proc.threshold(c);
    const bool accepted = c.height < threshold;
    if (config.record_diagnostics) {
      proc.diagnostics.log.push_back({c.time, c.event, c.height, threshold, accepted});
    }
    if (!accepted) continue;
    proc.accept(proc.make_record(c));
    if (proc.events.size() >= config.max_events) {
      status = SimStatus::kExplosionSuspected;
      break;
    }
  }
  if (proc.diagnostics.time_resolution_exhausted) status = SimStatus::kExplosionSuspected;
  return proc.finish(config.horizon, status, start);
}

CoupledResult simulate_coupled(const ModelSpec& model, const ModelSpec& dominating,
                               const SimConfig& config) {
  const auto start = Clock::now();
  model.validate();
  dominating.validate();
  check_config(config);
  if (!(model.events == dominating.events) || !(model.states == dominating.states)) {
    throw Error(ErrorCode::kInvalidModel, "coupled models must share event and state spaces");
  }

  CoupledResult out;
  out.spot_check_passed = spot_check_domination(model, dominating, config.seed);

  CoupledSource source = fork_for_coupling(Driver(config.seed));
  Consumer low(model, source.driver().mark_stream());
  Consumer high(dominating, source.driver().mark_stream());
  const auto weights = model.events.weights();
  SimStatus status = SimStatus::kCompleted;
  bool exhausted = false;

  Candidate c;
  while (draw(source, c, exhausted, weights, low.bounds, high.bounds)) {
    if (c.time > config.horizon) break;
    if (high.diagnostics.candidates == config.max_candidates) {
      status = SimStatus::kCandidateBudgetExhausted;
      break;
    }
    ++low.diagnostics.candidates;
    ++high.diagnostics.candidates;
    const double t_low = low.threshold(c);
    const double t_high = high.threshold(c);
    const bool acc_low = c.height < t_low;
    const bool acc_high = c.height < t_high;
    if (config.record_diagnostics) {
      low.diagnostics.log.push_back({c.time, c.event, c.height, t_low, acc_low});
      high.diagnostics.log.push_back({c.time, c.event, c.height, t_high, acc_high});
    }
    if (acc_low && !acc_high) throw DominationBreach(low.make_record(c), config.seed);
    if (acc_low) low.accept(low.make_record(c));
    if (acc_high) high.accept(high.make_record(c));
    if (low.events.size() >= config.max_events || high.events.size() >= config.max_events) {
      status = SimStatus::kExplosionSuspected;
      break;
    }
  }
  if (exhausted) {
    status = SimStatus::kExplosionSuspected;
    low.diagnostics.time_resolution_exhausted = high.diagnostics.time_resolution_exhausted = true;
  }
  out.dominated = low.finish(config.horizon, status, start);
  out.dominating = high.finish(config.horizon, status, start);
  return out;
}

std::vector<std::vector<double>> intensity_path(const ModelSpec& model, const Trajectory& trajectory,
                                                std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw Error(ErrorCode::kInvalidArgument, "intensity grid must be sorted");
  }
  std::vector<std::vector<double>> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const HistoryView h(trajectory, t);
    std::vector<double> row(model.events.size());
    for (std::size_t e = 0; e < row.size(); ++e) {
      row[e] = event_intensity(model.functional, e, h, model.states);
    }
    out.push_back(std::move(row));
  }
  return out;
}

ExplosionReport detect_explosion(const SimResult& result, double horizon) {
  ExplosionReport report;
  const auto events = result.trajectory.events();
  if (result.status != SimStatus::kExplosionSuspected || events.size() < 2) return report;
  const std::size_t gaps = events.size() - 1;
  const std::size_t tail = std::max<std::size_t>(1, gaps / 10);
  const double tail_sum = events.back().time - events[events.size() - 1 - tail].time;
  if (tail_sum < 1e-6 * horizon) {
    report.suspected = true;
    report.estimated_explosion_time = events.back().time;
  }
  return report;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, count)));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<SimResult> run_batch(const ModelSpec& model, const SimConfig& config,
                                 std::span<const std::uint64_t> seeds, unsigned workers) {
  std::vector<SimResult> results(seeds.size());
  parallel_for(seeds.size(), workers, [&](std::size_t i) {
    SimConfig cfg = config;
    cfg.seed = seeds[i];
    results[i] = simulate(model, cfg);
  });
  return results;
}

}  // namespace hmpp
