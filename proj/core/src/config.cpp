#include "hmpp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hmpp/error.hpp"

namespace hmpp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::kConfigError, path + ": " + msg);
}

class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  void expect_object(std::initializer_list<std::string_view> allowed) const {
    if (!j_.is_object()) fail(path_, "expected an object");
    std::set<std::string_view> ok(allowed);
    for (const auto& [key, value] : j_.items()) {
      if (!ok.contains(key)) fail(child_path(key), "unknown key");
    }
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }

  Node at(std::string_view key) const {
    if (!has(key)) fail(child_path(key), "missing required key");
    return {j_.at(std::string(key)), child_path(key)};
  }

  std::optional<Node> find(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return Node(j_.at(std::string(key)), child_path(key));
  }

  std::size_t size() const {
    if (!j_.is_array()) fail(path_, "expected an array");
    return j_.size();
  }

  Node operator[](std::size_t i) const {
    return {j_.at(i), path_ + "[" + std::to_string(i) + "]"};
  }

  double number() const {
    if (!j_.is_number()) fail(path_, "expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail(path_, "must be finite");
    return v;
  }

  double non_negative() const {
    const double v = number();
    if (v < 0.0) fail(path_, "must be >= 0");
    return v;
  }

  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail(path_, "must be > 0");
    return v;
  }

  std::uint64_t unsigned_integer() const {
    if (!j_.is_number_integer() || (j_.is_number_integer() && !j_.is_number_unsigned() && j_.get<std::int64_t>() < 0)) {
      fail(path_, "expected a non-negative integer");
    }
    return j_.get<std::uint64_t>();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail(path_, "expected true or false");
    return j_.get<bool>();
  }

  std::string string() const {
    if (!j_.is_string()) fail(path_, "expected a string");
    return j_.get<std::string>();
  }

  std::vector<double> numbers(bool non_negative_only) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) {
      out.push_back(non_negative_only ? (*this)[i].non_negative() : (*this)[i].number());
    }
    return out;
  }

 private:
  std::string child_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json& j_;
  std::string path_;
};

// Rethrows library validation errors as configuration errors at `path`.
template <class F>
auto guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    fail(path, e.what());
  }
}

EventSpace parse_events(const Node& n) {
  n.expect_object({"count", "weights"});
  if (auto w = n.find("weights")) {
    std::vector<double> weights;
    for (std::size_t i = 0; i < w->size(); ++i) weights.push_back((*w)[i].positive());
    if (weights.empty()) fail(w->path(), "needs at least one event type");
    if (auto c = n.find("count"); c && c->unsigned_integer() != weights.size()) {
      fail(c->path(), "disagrees with the number of weights");
    }
    return EventSpace(std::move(weights));
  }
  const auto count = n.at("count").unsigned_integer();
  if (count == 0) fail(n.path() + ".count", "needs at least one event type");
  return EventSpace(count);
}

StateSpace parse_states(const Node& n) {
  n.expect_object({"kind", "count"});
  const std::string kind = n.at("kind").string();
  if (kind == "discrete") {
    const auto count = n.at("count").unsigned_integer();
    if (count == 0) fail(n.path() + ".count", "must be >= 1");
    return StateSpace::discrete(count);
  }
  if (kind == "continuous") {
    if (n.has("count")) fail(n.path() + ".count", "not allowed for a continuous state space");
    return StateSpace::continuous();
  }
  fail(n.path() + ".kind", "unknown state space kind '" + kind + "'");
}

StateValue parse_state(const Node& n, const StateSpace& states) {
  if (states.is_discrete()) {
    const auto i = n.unsigned_integer();
    if (i >= states.size()) fail(n.path(), "state index out of range");
    return StateValue::discrete(i);
  }
  return StateValue::continuous(n.number());
}

KernelWeights parse_alpha(const Node& n, std::size_t d, std::size_t slots) {
  KernelWeights w(d, slots, 0.0);
  if (n.raw().is_number()) {
    const double a = n.non_negative();
    for (std::size_t s = 0; s < d; ++s)
      for (std::size_t x = 0; x < slots; ++x)
        for (std::size_t t = 0; t < d; ++t) w.at(s, x, t) = a;
    return w;
  }
  if (n.size() != d) fail(n.path(), "expected " + std::to_string(d) + " source rows");
  for (std::size_t s = 0; s < d; ++s) {
    const Node row = n[s];
    if (row.size() == 0) fail(row.path(), "empty row");
    const bool three_d = row[0].raw().is_array();
    if (!three_d) {
      if (row.size() != d) fail(row.path(), "expected " + std::to_string(d) + " targets");
      for (std::size_t t = 0; t < d; ++t) {
        const double a = row[t].non_negative();
        for (std::size_t x = 0; x < slots; ++x) w.at(s, x, t) = a;
      }
      continue;
    }
    if (row.size() != slots) fail(row.path(), "expected " + std::to_string(slots) + " state slots");
    for (std::size_t x = 0; x < slots; ++x) {
      const Node cell = row[x];
      if (cell.size() != d) fail(cell.path(), "expected " + std::to_string(d) + " targets");
      for (std::size_t t = 0; t < d; ++t) w.at(s, x, t) = cell[t].non_negative();
    }
  }
  return w;
}

Kernel parse_kernel(const Node& n, std::size_t d, const StateSpace& states) {
  const std::string kind = n.at("kind").string();
  if (kind == "exponential") {
    n.expect_object({"kind", "alpha", "beta"});
    auto alpha = parse_alpha(n.at("alpha"), d, states.slots());
    const double beta = n.at("beta").positive();
    return guarded(n.path(), [&] { return Kernel::exponential(std::move(alpha), beta); });
  }
  if (kind == "power_law") {
    n.expect_object({"kind", "alpha", "exponent", "cutoff"});
    auto alpha = parse_alpha(n.at("alpha"), d, states.slots());
    const double p = n.at("exponent").positive();
    const double c = n.at("cutoff").positive();
    return guarded(n.path(), [&] { return Kernel::power_law(std::move(alpha), p, c); });
  }
  fail(n.path() + ".kind", "unknown kernel kind '" + kind + "'");
}

EventFunctional parse_functional(const Node& n, std::size_t d, const StateSpace& states) {
  const std::string kind = n.at("kind").string();
  auto exact_length = [&](const Node& arr, std::size_t len) {
    if (arr.size() != len) fail(arr.path(), "expected " + std::to_string(len) + " entries");
  };
  if (kind == "constant") {
    n.expect_object({"kind", "rates"});
    const Node r = n.at("rates");
    exact_length(r, d);
    return EventFunctional::constant(r.numbers(true));
  }
  if (kind == "markov") {
    n.expect_object({"kind", "state_rates", "shares"});
    if (!states.is_discrete()) fail(n.path(), "markov functional needs a discrete state space");
    const Node r = n.at("state_rates");
    exact_length(r, states.size());
    std::vector<double> shares(d, 1.0);
    if (auto s = n.find("shares")) {
      exact_length(*s, d);
      shares = s->numbers(true);
    }
    return guarded(n.path(), [&] { return EventFunctional::markov(r.numbers(true), shares); });
  }
  if (kind == "hawkes") {
    n.expect_object({"kind", "base_rates", "kernel"});
    const Node b = n.at("base_rates");
    exact_length(b, d);
    Kernel k = parse_kernel(n.at("kernel"), d, states);
    return guarded(n.path(), [&] { return EventFunctional::hawkes(b.numbers(true), std::move(k)); });
  }
  if (kind == "count") {
    n.expect_object({"kind", "scale", "offset", "power"});
    const double scale = n.at("scale").positive();
    const double offset = n.at("offset").positive();
    const double power = n.at("power").non_negative();
    return guarded(n.path(), [&] { return EventFunctional::count_power(scale, offset, power, d); });
  }
  fail(n.path() + ".kind", "unknown functional kind '" + kind + "'");
}

TransitionFunction parse_transition(const Node& n, std::size_t d, const StateSpace& states) {
  const std::string kind = n.at("kind").string();
  if (kind == "identity") {
    n.expect_object({"kind"});
    if (!states.is_discrete()) return TransitionFunction::constant_jump(0.0);
    return TransitionFunction::identity(states.size(), d);
  }
  if (kind == "table") {
    n.expect_object({"kind", "probs"});
    if (!states.is_discrete()) fail(n.path(), "a transition table needs a discrete state space");
    const std::size_t nx = states.size();
    const Node p = n.at("probs");
    if (p.size() != nx) fail(p.path(), "expected " + std::to_string(nx) + " current-state rows");
    std::vector<double> flat;
    for (std::size_t x = 0; x < nx; ++x) {
      const Node ex = p[x];
      if (ex.size() != d) fail(ex.path(), "expected " + std::to_string(d) + " event rows");
      for (std::size_t e = 0; e < d; ++e) {
        const Node row = ex[e];
        if (row.size() != nx) fail(row.path(), "expected " + std::to_string(nx) + " probabilities");
        for (std::size_t y = 0; y < nx; ++y) flat.push_back(row[y].non_negative());
      }
    }
    return guarded(p.path(), [&] { return TransitionFunction::table(nx, d, std::move(flat)); });
  }
  if (kind == "gaussian_increment") {
    n.expect_object({"kind", "mean", "sd"});
    if (states.is_discrete()) fail(n.path(), "gaussian_increment needs a continuous state space");
    const double mean = n.at("mean").number();
    const double sd = n.at("sd").positive();
    return TransitionFunction::gaussian_increment(mean, sd);
  }
  if (kind == "constant_jump") {
    n.expect_object({"kind", "jump"});
    if (states.is_discrete()) fail(n.path(), "constant_jump needs a continuous state space");
    return TransitionFunction::constant_jump(n.at("jump").number());
  }
  fail(n.path() + ".kind", "unknown transition kind '" + kind + "'");
}

Trajectory parse_initial(const std::optional<Node>& n, std::size_t d, const StateSpace& states) {
  const StateValue zero = states.is_discrete() ? StateValue::discrete(0) : StateValue::continuous(0.0);
  if (!n) return Trajectory({}, {}, zero);
  n->expect_object({"origin_state", "records"});
  StateValue origin = zero;
  if (auto o = n->find("origin_state")) origin = parse_state(*o, states);
  std::vector<EventRecord> records;
  if (auto r = n->find("records")) {
    for (std::size_t i = 0; i < r->size(); ++i) {
      const Node rec = (*r)[i];
      rec.expect_object({"time", "event", "state"});
      const double t = rec.at("time").number();
      if (t > 0.0) fail(rec.path() + ".time", "initial records must have time <= 0");
      const auto e = rec.at("event").unsigned_integer();
      if (e >= d) fail(rec.path() + ".event", "event index out of range");
      records.push_back({t, {e, parse_state(rec.at("state"), states)}});
    }
  }
  return guarded(n->path(), [&] { return make_initial(std::move(records), origin); });
}

ModelSpec parse_model(const Node& n) {
  n.expect_object({"events", "states", "functional", "transition", "initial"});
  ModelSpec m;
  m.events = parse_events(n.at("events"));
  const std::size_t d = m.events.size();
  if (auto s = n.find("states")) m.states = parse_states(*s);
  m.functional = parse_functional(n.at("functional"), d, m.states);
  if (auto t = n.find("transition")) {
    m.transition = parse_transition(*t, d, m.states);
  } else {
    m.transition = m.states.is_discrete() ? TransitionFunction::identity(m.states.size(), d)
                                          : TransitionFunction::constant_jump(0.0);
  }
  m.initial = parse_initial(n.find("initial"), d, m.states);
  guarded(n.path(), [&] {
    m.validate();
    return 0;
  });
  return m;
}

RunSection parse_run(const std::optional<Node>& n) {
  RunSection run;
  if (!n) return run;
  n->expect_object({"horizon", "seed", "seeds", "max_events", "max_candidates"});
  if (auto h = n->find("horizon")) run.horizon = h->positive();
  if (n->has("seed") && n->has("seeds")) fail(n->path() + ".seeds", "give either seed or seeds");
  if (auto s = n->find("seed")) run.seeds = {s->unsigned_integer()};
  if (auto s = n->find("seeds")) {
    if (s->raw().is_string()) {
      run.seeds = guarded(s->path(), [&] { return parse_seed_list(s->string()); });
    } else {
      run.seeds.clear();
      for (std::size_t i = 0; i < s->size(); ++i) run.seeds.push_back((*s)[i].unsigned_integer());
      if (run.seeds.empty()) fail(s->path(), "needs at least one seed");
    }
  }
  if (auto m = n->find("max_events")) run.max_events = m->unsigned_integer();
  if (auto m = n->find("max_candidates")) run.max_candidates = m->unsigned_integer();
  return run;
}

ValidateSection parse_validate(const std::optional<Node>& n) {
  ValidateSection v;
  if (!n) return v;
  n->expect_object({"residuals", "transitions", "alpha"});
  if (auto r = n->find("residuals")) v.residuals = r->boolean();
  if (auto t = n->find("transitions")) v.transitions = t->boolean();
  if (auto a = n->find("alpha")) {
    v.alpha = a->number();
    if (!(v.alpha > 0.0 && v.alpha < 1.0)) fail(a->path(), "must lie in (0, 1)");
  }
  return v;
}

// Integers become doubles so that 2 and 2.0 hash alike.
json canonical(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = canonical(v);
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& v : j) out.push_back(canonical(v));
    return out;
  }
  if (j.is_number()) return json(j.get<double>());
  return j;
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

}  // namespace

SimConfig RunSection::sim_config(std::uint64_t seed) const {
  SimConfig c;
  c.horizon = horizon;
  c.max_events = max_events;
  c.max_candidates = max_candidates;
  c.seed = seed;
  return c;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  auto parse_one = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw Error(ErrorCode::kConfigError, "invalid seed '" + std::string(s) + "'");
    }
    return v;
  };
  std::vector<std::uint64_t> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_one(text.substr(0, dots));
    const auto hi = parse_one(text.substr(dots + 2));
    if (hi < lo) throw Error(ErrorCode::kConfigError, "empty seed range '" + std::string(text) + "'");
    for (std::uint64_t s = lo;; ++s) {
      out.push_back(s);
      if (s == hi) break;
    }
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_one(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ConfigDocument parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfigError, std::string("<document>: ") + e.what());
  }
  const Node root(j, "");
  if (!j.is_object()) fail("<document>", "expected an object");
  root.expect_object({"model", "run", "validate"});
  ConfigDocument doc;
  doc.model = parse_model(root.at("model"));
  doc.run = parse_run(root.find("run"));
  doc.validate = parse_validate(root.find("validate"));
  doc.model_hash = hex64(fnv1a64(canonical(j.at("model")).dump()));
  return doc;
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigError, path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hmpp
