#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "hmpp/simulator.hpp"
#include "hmpp/types.hpp"

namespace hmpp {

inline constexpr int kTraceFormatVersion = 1;

struct TraceHeader {
  int version = kTraceFormatVersion;
  std::string model_hash;
  std::uint64_t seed = 0;
  std::string rng;
  double horizon = 0.0;
  SimStatus status = SimStatus::kCompleted;
  /// Number of discrete states, 0 for a real-valued state.
  std::size_t discrete_states = 0;
};

struct Trace {
  TraceHeader header;
  Trajectory trajectory;
};

/// Text form:
///
///     # hmpp-trace 1
///     # model_hash=0123456789abcdef
///     # seed=42
///     # rng=xoshiro256starstar-splitmix64-v1
///     # horizon=1000
///     # status=Completed
///     # state_space=discrete:2
///     # origin_state=0
///     time,event,state,segment
///     -1,0,1,initial
///     0.25,1,0,event
///
/// Reals use the shortest representation that parses back to the same double.
std::string serialize_trace(const TraceHeader& header, const Trajectory& trajectory);

/// Throws ErrorCode::kTraceFormat on malformed input.
Trace parse_trace(std::string_view text);

void write_trace_file(const std::filesystem::path& path, const TraceHeader& header,
                      const Trajectory& trajectory);
Trace read_trace_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace hmpp
