#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "cli/commands.hpp"
#include "hmpp/config.hpp"
#include "hmpp/error.hpp"
#include "hmpp/simulator.hpp"
#include "hmpp/trace.hpp"
#include "support/models.hpp"

using namespace hmpp;
namespace fs = std::filesystem;

namespace {

const char* kPoisson = R"({
  "model": {
    "events": {"weights": [1.0]},
    "states": {"kind": "discrete", "count": 1},
    "functional": {"kind": "constant", "rates": [2.0]},
    "transition": {"kind": "identity"}
  },
  "run": {"horizon": 100, "seed": 3}
})";

struct TempDir {
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("hmpp_cli_test_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
  fs::path path;
};

std::string config_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigError);
    return e.what();
  }
  FAIL("expected ConfigError");
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("seed lists") {
  CHECK(parse_seed_list("7") == std::vector<std::uint64_t>{7});
  CHECK(parse_seed_list("1,5,9") == std::vector<std::uint64_t>{1, 5, 9});
  const auto range = parse_seed_list("1..100");
  REQUIRE(range.size() == 100);
  CHECK(range.front() == 1);
  CHECK(range.back() == 100);
  CHECK_THROWS_AS(parse_seed_list(""), Error);
  CHECK_THROWS_AS(parse_seed_list("5..1"), Error);
  CHECK_THROWS_AS(parse_seed_list("x"), Error);
}

TEST_CASE("config parsing") {
  const auto doc = parse_config(kPoisson);
  CHECK(doc.run.horizon == 100.0);
  CHECK(doc.run.seeds == std::vector<std::uint64_t>{3});
  CHECK(doc.model.functional.as_constant() != nullptr);
  CHECK(doc.model_hash.size() == 16);

  SUBCASE("error paths") {
    std::string bad = kPoisson;
    bad.replace(bad.find("[2.0]"), 5, "[-1.0]");
    CHECK(config_error(bad).find("model.functional.rates[0]") != std::string::npos);

    std::string unknown = kPoisson;
    unknown.replace(unknown.find("\"seed\": 3"), 9, "\"seed\": 3, \"colour\": 1");
    CHECK(config_error(unknown).find("run.colour") != std::string::npos);

    CHECK(config_error("{").size() > 0);
    CHECK(config_error(R"({"run": {"horizon": 1}})").find("model") != std::string::npos);
  }

  SUBCASE("hash ignores key order and integer spelling") {
    const std::string permuted = R"({
      "run": {"seed": 3, "horizon": 100},
      "model": {
        "transition": {"kind": "identity"},
        "functional": {"rates": [2], "kind": "constant"},
        "states": {"count": 1, "kind": "discrete"},
        "events": {"weights": [1]}
      }
    })";
    CHECK(parse_config(permuted).model_hash == doc.model_hash);
    std::string other = kPoisson;
    other.replace(other.find("[2.0]"), 5, "[2.5]");
    CHECK(parse_config(other).model_hash != doc.model_hash);
    std::string rerun = kPoisson;
    rerun.replace(rerun.find("\"seed\": 3"), 9, "\"seed\": 4");
    CHECK(parse_config(rerun).model_hash == doc.model_hash);
  }

  SUBCASE("example models load") {
    for (const auto& entry : fs::directory_iterator(HMPP_MODELS_DIR)) {
      if (entry.path().extension() != ".json") continue;
      CAPTURE(entry.path().string());
      CHECK_NOTHROW((void)load_config(entry.path()));
    }
  }
}

TEST_CASE("trace round trip") {
  const ModelSpec m = testing::state_hawkes_model();
  SimConfig c;
  c.horizon = 200.0;
  c.seed = 17;
  const auto r = simulate(m, c);
  TraceHeader h;
  h.model_hash = "0123456789abcdef";
  h.seed = 17;
  h.rng = std::string(Rng::kAlgorithm);
  h.horizon = 200.0;
  h.status = r.status;
  h.discrete_states = 2;
  const std::string text = serialize_trace(h, r.trajectory);
  const Trace back = parse_trace(text);
  CHECK(back.trajectory == r.trajectory);
  CHECK(back.header.model_hash == h.model_hash);
  CHECK(back.header.seed == 17);
  CHECK(back.header.horizon == 200.0);
  CHECK(serialize_trace(back.header, back.trajectory) == text);

  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
  const double awkward = 0.1 + 0.2;
  CHECK(std::stod(format_double(awkward)) == awkward);

  CHECK_THROWS_AS(parse_trace("not a trace"), Error);
  std::string broken = text;
  broken.replace(broken.find("# hmpp-trace 1"), 14, "# hmpp-trace 9");
  CHECK_THROWS_AS(parse_trace(broken), Error);
}

TEST_CASE("exit code mapping") {
  using namespace hmpp::cli;
  CHECK(exit_code_for(ErrorCode::kConfigError) == kExitConfig);
  CHECK(exit_code_for(ErrorCode::kHashMismatch) == kExitHashMismatch);
  CHECK(exit_code_for(ErrorCode::kDominationBreach) == kExitDominationBreach);
  CHECK(exit_code_for(ErrorCode::kMajorantViolation) == kExitSimulationError);
  CHECK(trace_file_name(12) == "trace_seed12.csv");
}

TEST_CASE("commands") {
  using namespace hmpp::cli;
  TempDir dir;
  const fs::path cfg = dir.write("poisson.json", kPoisson);
  std::ostringstream out, err;

  SUBCASE("simulate then validate") {
    SimulateOptions s;
    s.config = cfg;
    s.output = dir.path / "one.csv";
    CHECK(cmd_simulate(s, out, err) == kExitOk);
    ValidateOptions v;
    v.config = cfg;
    v.traces = {dir.path / "one.csv"};
    CHECK(cmd_validate(v, out, err) == kExitOk);

    std::string other = kPoisson;
    other.replace(other.find("[2.0]"), 5, "[3.0]");
    v.config = dir.write("other.json", other);
    CHECK(cmd_validate(v, out, err) == kExitHashMismatch);
  }
  SUBCASE("seed sweep writes one trace per seed") {
    SimulateOptions s;
    s.config = cfg;
    s.seeds = "1..100";
    s.horizon = 5.0;
    s.out_dir = dir.path / "sweep";
    s.workers = 2;
    CHECK(cmd_simulate(s, out, err) == kExitOk);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(s.out_dir)) files += e.path().extension() == ".csv" ? 1 : 0;
    CHECK(files == 100);
    CHECK(fs::exists(s.out_dir / trace_file_name(57)));
  }
  SUBCASE("same seed gives identical bytes regardless of workers") {
    SimulateOptions s;
    s.config = cfg;
    s.seeds = "1..4";
    s.out_dir = dir.path / "a";
    s.workers = 1;
    REQUIRE(cmd_simulate(s, out, err) == kExitOk);
    s.out_dir = dir.path / "b";
    s.workers = 3;
    REQUIRE(cmd_simulate(s, out, err) == kExitOk);
    for (int seed = 1; seed <= 4; ++seed) {
      CHECK(slurp(dir.path / "a" / trace_file_name(seed)) == slurp(dir.path / "b" / trace_file_name(seed)));
    }
  }
  SUBCASE("short traces are inconclusive") {
    SimulateOptions s;
    s.config = cfg;
    s.horizon = 5.0;
    s.output = dir.path / "short.csv";
    REQUIRE(cmd_simulate(s, out, err) == kExitOk);
    ValidateOptions v;
    v.config = cfg;
    v.traces = {s.output.value()};
    CHECK(cmd_validate(v, out, err) == kExitInconclusive);
  }
  SUBCASE("bad config") {
    SimulateOptions s;
    s.config = dir.write("bad.json", "{\"model\": 1}");
    CHECK(cmd_simulate(s, out, err) == kExitConfig);
    s.config = dir.path / "missing.json";
    CHECK(cmd_simulate(s, out, err) == kExitConfig);
  }
  SUBCASE("check and couple") {
    CheckOptions c;
    c.config = fs::path(HMPP_MODELS_DIR) / "hawkes_unstable.json";
    CHECK(cmd_check(c, out, err) == kExitAssumptionViolated);
    c.config = fs::path(HMPP_MODELS_DIR) / "hawkes.json";
    CHECK(cmd_check(c, out, err) == kExitOk);

    CoupleOptions k;
    k.config = fs::path(HMPP_MODELS_DIR) / "hawkes_dominated.json";
    k.dominating = fs::path(HMPP_MODELS_DIR) / "hawkes_dominator.json";
    k.seeds = "1..20";
    CHECK(cmd_couple(k, out, err) == kExitOk);
    std::swap(k.config, k.dominating);
    CHECK(cmd_couple(k, out, err) == kExitDominationBreach);
  }
  SUBCASE("intensity path") {
    SimulateOptions s;
    s.config = cfg;
    s.output = dir.path / "t.csv";
    REQUIRE(cmd_simulate(s, out, err) == kExitOk);
    IntensityPathOptions p;
    p.config = cfg;
    p.trace = dir.path / "t.csv";
    p.points = 11;
    p.output = dir.path / "path.csv";
    CHECK(cmd_intensity_path(p, out, err) == kExitOk);
    std::istringstream lines(slurp(dir.path / "path.csv"));
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) ++n;
    CHECK(n == 12);
  }
}
