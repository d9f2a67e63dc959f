#include "hmpp/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "hmpp/error.hpp"

namespace hmpp {

namespace {

constexpr std::string_view kMagic = "# hmpp-trace ";
constexpr std::string_view kColumns = "time,event,state,segment";

[[noreturn]] void bad(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kTraceFormat, "line " + std::to_string(line) + ": " + msg);
}

template <class T>
T parse_number(std::string_view s, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad(line, "invalid number '" + std::string(s) + "'");
  }
  return v;
}

std::string format_state(const StateValue& x) {
  return x.is_discrete() ? std::to_string(x.index()) : format_double(x.value());
}

StateValue parse_state(std::string_view s, std::size_t discrete_states, std::size_t line) {
  if (discrete_states > 0) {
    const auto i = parse_number<std::size_t>(s, line);
    if (i >= discrete_states) bad(line, "state index out of range");
    return StateValue::discrete(i);
  }
  return StateValue::continuous(parse_number<double>(s, line));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorCode::kInvalidArgument, "cannot format number");
  return {buf, ptr};
}

std::string serialize_trace(const TraceHeader& header, const Trajectory& trajectory) {
  std::string out;
  out.reserve(64 * (trajectory.records().size() + 10));
  out += kMagic;
  out += std::to_string(header.version);
  out += "\n# model_hash=" + header.model_hash;
  out += "\n# seed=" + std::to_string(header.seed);
  out += "\n# rng=" + header.rng;
  out += "\n# horizon=" + format_double(header.horizon);
  out += "\n# status=" + std::string(to_string(header.status));
  out += "\n# state_space=";
  out += header.discrete_states > 0 ? "discrete:" + std::to_string(header.discrete_states) : "continuous";
  out += "\n# origin_state=" + format_state(trajectory.origin_state());
  out += "\n";
  out += kColumns;
  out += "\n";
  const std::size_t n_initial = trajectory.initial().size();
  const auto records = trajectory.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EventRecord& r = records[i];
    out += format_double(r.time);
    out += ',';
    out += std::to_string(r.mark.event);
    out += ',';
    out += format_state(r.mark.state);
    out += i < n_initial ? ",initial\n" : ",event\n";
  }
  return out;
}

Trace parse_trace(std::string_view text) {
  Trace trace;
  TraceHeader& h = trace.header;
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || !lines[0].starts_with(kMagic)) bad(1, "missing trace header");
  h.version = parse_number<int>(lines[0].substr(kMagic.size()), 1);
  if (h.version != kTraceFormatVersion) bad(1, "unsupported trace version");

  std::string origin_text;
  bool have_space = false;
  std::size_t i = 1;
  for (; i < lines.size() && lines[i].starts_with("# "); ++i) {
    const std::string_view kv = lines[i].substr(2);
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) bad(i + 1, "header line without '='");
    const std::string_view key = kv.substr(0, eq);
    const std::string_view value = kv.substr(eq + 1);
    if (key == "model_hash") {
      h.model_hash = value;
    } else if (key == "seed") {
      h.seed = parse_number<std::uint64_t>(value, i + 1);
    } else if (key == "rng") {
      h.rng = value;
    } else if (key == "horizon") {
      h.horizon = parse_number<double>(value, i + 1);
    } else if (key == "status") {
      const auto s = parse_sim_status(value);
      if (!s) bad(i + 1, "unknown status '" + std::string(value) + "'");
      h.status = *s;
    } else if (key == "state_space") {
      have_space = true;
      if (value == "continuous") {
        h.discrete_states = 0;
      } else if (value.starts_with("discrete:")) {
        h.discrete_states = parse_number<std::size_t>(value.substr(9), i + 1);
        if (h.discrete_states == 0) bad(i + 1, "empty discrete state space");
      } else {
        bad(i + 1, "unknown state space '" + std::string(value) + "'");
      }
    } else if (key == "origin_state") {
      origin_text = value;
    } else {
      bad(i + 1, "unknown header key '" + std::string(key) + "'");
    }
  }
  if (!have_space) bad(i, "missing state_space header");
  if (i >= lines.size() || lines[i] != kColumns) bad(i + 1, "missing column header");
  ++i;

  const StateValue origin = origin_text.empty()
                                ? (h.discrete_states > 0 ? StateValue::discrete(0) : StateValue::continuous(0.0))
                                : parse_state(origin_text, h.discrete_states, i);
  std::vector<EventRecord> initial;
  std::vector<EventRecord> events;
  for (; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 4) bad(i + 1, "expected 4 fields");
    EventRecord r{parse_number<double>(f[0], i + 1),
                  {parse_number<std::size_t>(f[1], i + 1), parse_state(f[2], h.discrete_states, i + 1)}};
    if (f[3] == "initial") {
      if (!events.empty()) bad(i + 1, "initial record after an event record");
      initial.push_back(r);
    } else if (f[3] == "event") {
      events.push_back(r);
    } else {
      bad(i + 1, "unknown segment '" + std::string(f[3]) + "'");
    }
  }
  try {
    trace.trajectory = Trajectory(std::move(initial), std::move(events), origin);
  } catch (const Error& e) {
    throw Error(ErrorCode::kTraceFormat, e.what());
  }
  return trace;
}

void write_trace_file(const std::filesystem::path& path, const TraceHeader& header,
                      const Trajectory& trajectory) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  const std::string text = serialize_trace(header, trajectory);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kInvalidArgument, "write failed for " + path.string());
}

Trace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kTraceFormat, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

}  // namespace hmpp
