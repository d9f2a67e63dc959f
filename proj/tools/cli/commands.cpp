#include "cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "hmpp/assumptions.hpp"
#include "hmpp/config.hpp"
#include "hmpp/rng.hpp"
#include "hmpp/simulator.hpp"
#include "hmpp/trace.hpp"
#include "hmpp/validation.hpp"

namespace hmpp::cli {

namespace {

using nlohmann::json;

template <class F>
int run_guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

std::vector<std::uint64_t> resolve_seeds(const std::optional<std::string>& flag, const RunSection& run) {
  return flag ? parse_seed_list(*flag) : run.seeds;
}

TraceHeader header_for(const ConfigDocument& doc, std::uint64_t seed, double horizon, SimStatus status) {
  TraceHeader h;
  h.model_hash = doc.model_hash;
  h.seed = seed;
  h.rng = std::string(Rng::kAlgorithm);
  h.horizon = horizon;
  h.status = status;
  h.discrete_states = doc.model.states.size();
  return h;
}

// Times of `inner` that are missing from `outer`; both are sorted.
std::size_t missing_events(std::span<const EventRecord> inner, std::span<const EventRecord> outer) {
  std::size_t missing = 0;
  std::size_t j = 0;
  for (const EventRecord& r : inner) {
    while (j < outer.size() && outer[j].time < r.time) ++j;
    if (j == outer.size() || outer[j].time != r.time || outer[j].mark.event != r.mark.event) ++missing;
  }
  return missing;
}

json entry_json(const AssumptionEntry& e) {
  json j{{"id", e.id}, {"status", std::string(to_string(e.status))}, {"detail", e.detail}};
  if (e.tolerance > 0.0) j["tolerance"] = e.tolerance;
  if (!e.witness.empty()) j["witness"] = e.witness;
  return j;
}

json ks_json(const KsResult& k) {
  return {{"statistic", k.statistic}, {"critical", k.critical}, {"n", k.n}, {"pass", k.pass},
          {"reliable", k.reliable}};
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kConfigError: return kExitConfig;
    case ErrorCode::kHashMismatch: return kExitHashMismatch;
    case ErrorCode::kDominationBreach: return kExitDominationBreach;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kTraceFormat: return kExitError;
    default: return kExitSimulationError;
  }
}

unsigned default_workers() {
  const char* env = std::getenv("HMPP_WORKERS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0' || v == 0 || v > 1024) return 1;
  return static_cast<unsigned>(v);
}

std::string trace_file_name(std::uint64_t seed) { return "trace_seed" + std::to_string(seed) + ".csv"; }

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const ConfigDocument doc = load_config(opt.config);
    const auto seeds = resolve_seeds(opt.seeds, doc.run);
    const double horizon = opt.horizon.value_or(doc.run.horizon);
    if (!(horizon > 0.0)) throw Error(ErrorCode::kConfigError, "--horizon: must be > 0");
    if (opt.output && seeds.size() != 1) {
      throw Error(ErrorCode::kConfigError, "--output: needs exactly one seed, use --out-dir for sweeps");
    }
    if (!opt.output) std::filesystem::create_directories(opt.out_dir);

    struct Outcome {
      SimStatus status = SimStatus::kCompleted;
      std::size_t events = 0;
      std::uint64_t candidates = 0;
      std::filesystem::path path;
      std::string error;
      int code = kExitOk;
    };
    std::vector<Outcome> outcomes(seeds.size());
    RunSection run = doc.run;
    run.horizon = horizon;
    parallel_for(seeds.size(), opt.workers, [&](std::size_t i) {
      Outcome& o = outcomes[i];
      try {
        const SimResult r = simulate(doc.model, run.sim_config(seeds[i]));
        o.status = r.status;
        o.events = r.trajectory.events().size();
        o.candidates = r.diagnostics.candidates;
        o.path = opt.output ? *opt.output : opt.out_dir / trace_file_name(seeds[i]);
        write_trace_file(o.path, header_for(doc, seeds[i], horizon, r.status), r.trajectory);
        if (r.status == SimStatus::kExplosionSuspected) o.code = kExitExplosion;
        if (r.status == SimStatus::kCandidateBudgetExhausted) o.code = kExitBudget;
      } catch (const Error& e) {
        o.error = e.what();
        o.code = exit_code_for(e.code());
      }
    });

    int code = kExitOk;
    json report = json::array();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const Outcome& o = outcomes[i];
      if (code == kExitOk || (o.code != kExitOk && o.code != kExitExplosion && o.code != kExitBudget)) {
        if (o.code != kExitOk) code = o.code;
      }
      if (opt.json) {
        json j{{"seed", seeds[i]}};
        if (o.error.empty()) {
          j.update({{"status", std::string(to_string(o.status))}, {"events", o.events},
                    {"candidates", o.candidates}, {"trace", o.path.string()}});
        } else {
          j["error"] = o.error;
        }
        report.push_back(j);
      } else if (o.error.empty()) {
        out << "seed=" << seeds[i] << " status=" << to_string(o.status) << " events=" << o.events
            << " candidates=" << o.candidates << " trace=" << o.path.string() << "\n";
      } else {
        out << "seed=" << seeds[i] << " error=\"" << o.error << "\"\n";
      }
    }
    if (opt.json) out << json{{"model_hash", doc.model_hash}, {"runs", report}}.dump(2) << "\n";
    return code;
  });
}

int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const ConfigDocument doc = load_config(opt.config);
    const double horizon = opt.horizon.value_or(doc.run.horizon);
    const AssumptionReport report = check_model(doc.model, horizon);
    if (opt.json) {
      json j{{"model_hash", doc.model_hash}, {"entries", json::array()}};
      for (const auto& e : report.entries) j["entries"].push_back(entry_json(e));
      if (report.branching_ratio) j["branching_ratio"] = *report.branching_ratio;
      if (report.phi_sup) j["phi_sup"] = std::isfinite(*report.phi_sup) ? json(*report.phi_sup) : json("inf");
      if (report.summability_partial_sum) j["summability_partial_sum"] = *report.summability_partial_sum;
      j["violated"] = report.any_violated();
      out << j.dump(2) << "\n";
    } else {
      for (const auto& e : report.entries) {
        out << "[" << to_string(e.status) << "] " << e.id;
        if (!e.detail.empty()) out << ": " << e.detail;
        if (!e.witness.empty()) out << " (witness: " << e.witness << ")";
        out << "\n";
      }
      if (report.branching_ratio) out << "rho=" << format_double(*report.branching_ratio) << "\n";
    }
    return report.any_violated() ? kExitAssumptionViolated : kExitOk;
  });
}

int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const ConfigDocument doc = load_config(opt.config);
    const double alpha = opt.alpha.value_or(doc.validate.alpha);
    const bool transitions = doc.validate.transitions && doc.model.transition.is_discrete();
    bool mismatch = false;
    bool failed = false;
    bool inconclusive = false;
    json report = json::array();
    for (const auto& path : opt.traces) {
      const Trace trace = read_trace_file(path);
      json j{{"trace", path.string()}, {"seed", trace.header.seed}};
      if (trace.header.model_hash != doc.model_hash) {
        mismatch = true;
        const std::string msg = "HashMismatch: trace " + path.string() + " has model hash " +
                                trace.header.model_hash + ", config has " + doc.model_hash;
        err << "error: " << msg << "\n";
        j["error"] = msg;
        report.push_back(j);
        continue;
      }
      bool pass = true;
      bool reliable = true;
      std::string line = path.string() + ":";
      if (doc.validate.residuals) {
        const ResidualSet r = rescaled_residuals(trace.trajectory, doc.model, alpha);
        pass = pass && r.pass;
        reliable = reliable && r.reliable;
        json per_type = json::array();
        for (const auto& k : r.per_type_ks) per_type.push_back(ks_json(k));
        j["residuals"] = {{"pooled", ks_json(r.pooled)}, {"per_type", per_type}, {"reliable", r.reliable}};
        line += " ks_D=" + format_double(r.pooled.statistic) + " ks_crit=" + format_double(r.pooled.critical) +
                " n=" + std::to_string(r.pooled.n) + (r.pass ? " ks=pass" : " ks=FAIL");
      }
      if (transitions) {
        const TransitionTestReport t = transition_frequency_test(trace.trajectory, doc.model.transition, alpha);
        pass = pass && t.pass;
        j["transitions"] = {{"statistic", std::isfinite(t.statistic) ? json(t.statistic) : json("inf")},
                            {"dof", t.dof},
                            {"p_value", t.p_value},
                            {"pass", t.pass},
                            {"transitions", t.transitions},
                            {"skipped_cells", t.skipped_cells}};
        line += " chi2=" + format_double(t.statistic) + " dof=" + std::to_string(t.dof) +
                " p=" + format_double(t.p_value) + (t.pass ? " chi2=pass" : " chi2=FAIL");
      }
      const char* verdict = !reliable ? "inconclusive" : pass ? "pass" : "fail";
      if (!reliable) {
        inconclusive = true;
        line += " (fewer than " + std::to_string(kMinReliableSample) + " residuals per type: unreliable)";
      } else if (!pass) {
        failed = true;
      }
      j["verdict"] = verdict;
      report.push_back(j);
      if (!opt.json) out << line << " verdict=" << verdict << "\n";
    }
    if (opt.json) out << json{{"model_hash", doc.model_hash}, {"alpha", alpha}, {"traces", report}}.dump(2) << "\n";
    if (mismatch) return kExitHashMismatch;
    if (failed) return kExitValidationFailed;
    if (inconclusive) return kExitInconclusive;
    return kExitOk;
  });
}

int cmd_couple(const CoupleOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const ConfigDocument a = load_config(opt.config);
    const ConfigDocument b = load_config(opt.dominating);
    const auto seeds = resolve_seeds(opt.seeds, a.run);
    RunSection run = a.run;
    run.horizon = opt.horizon.value_or(a.run.horizon);

    struct Outcome {
      bool contained = false;
      bool spot_check = true;
      std::size_t dominated = 0;
      std::size_t dominating = 0;
      std::optional<EventRecord> breach;
      std::string error;
      int code = kExitOk;
    };
    std::vector<Outcome> outcomes(seeds.size());
    parallel_for(seeds.size(), opt.workers, [&](std::size_t i) {
      Outcome& o = outcomes[i];
      try {
        const CoupledResult r = simulate_coupled(a.model, b.model, run.sim_config(seeds[i]));
        o.spot_check = r.spot_check_passed;
        o.dominated = r.dominated.trajectory.events().size();
        o.dominating = r.dominating.trajectory.events().size();
        o.contained = missing_events(r.dominated.trajectory.events(), r.dominating.trajectory.events()) == 0;
        if (!o.contained) o.code = kExitDominationBreach;
      } catch (const DominationBreach& e) {
        o.breach = e.offending();
        o.error = e.what();
        o.code = kExitDominationBreach;
      } catch (const Error& e) {
        o.error = e.what();
        o.code = exit_code_for(e.code());
      }
    });

    int code = kExitOk;
    std::size_t contained = 0;
    json report = json::array();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const Outcome& o = outcomes[i];
      if (o.code != kExitOk && code == kExitOk) code = o.code;
      if (o.error.empty() && o.contained) ++contained;
      json j{{"seed", seeds[i]}, {"contained", o.error.empty() && o.contained}, {"spot_check", o.spot_check}};
      std::string line = "seed=" + std::to_string(seeds[i]);
      if (o.breach) {
        j["breach"] = {{"time", o.breach->time}, {"event", o.breach->mark.event}};
        line += " contained=no breach_time=" + format_double(o.breach->time) +
                " breach_event=" + std::to_string(o.breach->mark.event);
      } else if (!o.error.empty()) {
        j["error"] = o.error;
        line += " error=\"" + o.error + "\"";
      } else {
        j.update({{"dominated_events", o.dominated}, {"dominating_events", o.dominating}});
        line += std::string(" contained=") + (o.contained ? "yes" : "no") +
                " dominated_events=" + std::to_string(o.dominated) +
                " dominating_events=" + std::to_string(o.dominating);
      }
      if (!o.spot_check) line += " spot_check=FAIL";
      report.push_back(j);
      if (!opt.json) out << line << "\n";
    }
    if (opt.json) {
      out << json{{"runs", report}, {"contained", contained}, {"total", seeds.size()}}.dump(2) << "\n";
    } else {
      out << "contained " << contained << "/" << seeds.size() << "\n";
    }
    return code;
  });
}

int cmd_intensity_path(const IntensityPathOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const ConfigDocument doc = load_config(opt.config);
    const Trace trace = read_trace_file(opt.trace);
    if (trace.header.model_hash != doc.model_hash) {
      throw Error(ErrorCode::kHashMismatch, "trace " + opt.trace.string() + " was produced by another model");
    }
    if (opt.points == 0) throw Error(ErrorCode::kInvalidArgument, "--points must be >= 1");
    std::vector<double> grid(opt.points);
    for (std::size_t i = 0; i < opt.points; ++i) {
      grid[i] = trace.header.horizon * static_cast<double>(i + 1) / static_cast<double>(opt.points);
    }
    const auto rows = intensity_path(doc.model, trace.trajectory, grid);

    std::ofstream file;
    if (opt.output) {
      file.open(*opt.output, std::ios::binary | std::ios::trunc);
      if (!file) throw Error(ErrorCode::kInvalidArgument, "cannot write " + opt.output->string());
    }
    std::ostream& sink = opt.output ? static_cast<std::ostream&>(file) : out;
    sink << "time";
    for (std::size_t e = 0; e < doc.model.events.size(); ++e) sink << ",lambda_" << e;
    sink << "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sink << format_double(grid[i]);
      for (double v : rows[i]) sink << ',' << format_double(v);
      sink << "\n";
    }
    return kExitOk;
  });
}

}  // namespace hmpp::cli
