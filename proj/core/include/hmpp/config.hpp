#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hmpp/model.hpp"
#include "hmpp/simulator.hpp"

namespace hmpp {

struct RunSection {
  double horizon = 1.0;
  std::vector<std::uint64_t> seeds{0};
  std::size_t max_events = 10'000'000;
  std::size_t max_candidates = 1'000'000'000;

  SimConfig sim_config(std::uint64_t seed) const;
};

struct ValidateSection {
  bool residuals = true;
  bool transitions = true;
  double alpha = 0.01;
};

/// A parsed configuration document.
///
/// ```json
/// {
///   "model": {
///     "events": {"weights": [1.0]},
///     "states": {"kind": "discrete", "count": 1},
///     "functional": {"kind": "constant", "rates": [2.0]},
///     "transition": {"kind": "identity"},
///     "initial": {"origin_state": 0, "records": []}
///   },
///   "run": {"horizon": 1000, "seed": 42},
///   "validate": {"residuals": true, "transitions": true, "alpha": 0.01}
/// }
/// ```
struct ConfigDocument {
  ModelSpec model;
  RunSection run;
  ValidateSection validate;
  /// FNV-1a 64 of the canonical model section, as 16 hex digits.
  std::string model_hash;
};

/// Throws ErrorCode::kConfigError with the path of the offending key, e.g.
/// "model.functional.rates[0]: must be >= 0".
ConfigDocument parse_config(std::string_view text);
ConfigDocument load_config(const std::filesystem::path& path);

/// "7", "1..100" (inclusive) or "1,5,9".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace hmpp
