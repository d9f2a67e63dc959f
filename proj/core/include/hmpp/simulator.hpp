#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hmpp/error.hpp"
#include "hmpp/model.hpp"

namespace hmpp {

struct SimConfig {
  double horizon = 1.0;
  std::size_t max_events = 10'000'000;
  std::size_t max_candidates = 1'000'000'000;
  std::uint64_t seed = 0;
  /// Keep a log of every candidate and its acceptance threshold.
  bool record_diagnostics = false;
};

enum class SimStatus { kCompleted, kExplosionSuspected, kCandidateBudgetExhausted };

std::string_view to_string(SimStatus status) noexcept;
std::optional<SimStatus> parse_sim_status(std::string_view text) noexcept;

struct CandidateLog {
  double time = 0.0;
  std::size_t event = 0;
  double height = 0.0;
  /// weight(e) * lambda-bar(e | history before time)
  double threshold = 0.0;
  bool accepted = false;
};

struct SimDiagnostics {
  std::uint64_t candidates = 0;
  std::uint64_t accepted = 0;
  double acceptance_rate = 0.0;
  std::vector<std::size_t> per_type_counts;
  /// lambda-bar(e | full history) at the end of the run.
  std::vector<double> final_intensity;
  double wall_seconds = 0.0;
  /// Set when a candidate gap fell below the resolution of the current time.
  bool time_resolution_exhausted = false;
  std::vector<CandidateLog> log;
};

struct SimResult {
  Trajectory trajectory;
  SimStatus status = SimStatus::kCompleted;
  SimDiagnostics diagnostics;
};

/// Simulates the hybrid marked point process on (0, horizon] by thinning the
/// lazily realized driving Poisson measure. Candidates exactly at the horizon
/// are kept.
///
/// Throws Error with kInvalidModel, kMajorantViolation, kNonFiniteIntensity or
/// kNoValidBound.
SimResult simulate(const ModelSpec& model, const SimConfig& config);

struct CoupledResult {
  SimResult dominated;
  SimResult dominating;
  /// Result of comparing both functionals on sampled histories before the run.
  bool spot_check_passed = true;
};

/// Thrown by simulate_coupled when the dominated process accepts a candidate
/// that the dominating process rejects.
class DominationBreach : public Error {
 public:
  DominationBreach(const EventRecord& offending, std::uint64_t seed);
  const EventRecord& offending() const noexcept { return offending_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  EventRecord offending_;
  std::uint64_t seed_;
};

/// Drives both models from one forked driver. Every event of `model` must also
/// be an event of `dominating`; otherwise DominationBreach is thrown.
CoupledResult simulate_coupled(const ModelSpec& model, const ModelSpec& dominating,
                               const SimConfig& config);

/// lambda-bar(e | records strictly before t) for every grid time; rows are
/// grid points, columns event types.
std::vector<std::vector<double>> intensity_path(const ModelSpec& model, const Trajectory& trajectory,
                                                std::span<const double> grid);

struct ExplosionReport {
  bool suspected = false;
  /// Time of the last event when explosion is suspected.
  double estimated_explosion_time = 0.0;
};

/// Suspects explosion when the run stopped early (event cap or exhausted time
/// resolution) and the last 10% of inter-event gaps sum to less than
/// 1e-6 * horizon.
ExplosionReport detect_explosion(const SimResult& result, double horizon);

/// Calls task(i) for every i in [0, count) on `workers` threads (0 picks the
/// hardware concurrency). After all tasks finish, the exception of the lowest
/// failing index is rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

/// Runs one simulation per seed on `workers` threads (0 picks the hardware
/// concurrency). Results are in seed order.
std::vector<SimResult> run_batch(const ModelSpec& model, const SimConfig& config,
                                 std::span<const std::uint64_t> seeds, unsigned workers = 0);

}  // namespace hmpp
