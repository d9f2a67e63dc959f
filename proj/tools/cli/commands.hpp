#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hmpp/error.hpp"

namespace hmpp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitConfig = 2,
  kExitExplosion = 3,
  kExitBudget = 4,
  kExitValidationFailed = 5,
  kExitInconclusive = 6,
  kExitHashMismatch = 7,
  kExitDominationBreach = 8,
  kExitAssumptionViolated = 9,
  kExitSimulationError = 10,
};

int exit_code_for(ErrorCode code) noexcept;

/// Worker count from HMPP_WORKERS, or 1 when unset or invalid.
unsigned default_workers();

struct SimulateOptions {
  std::filesystem::path config;
  std::optional<std::string> seeds;
  std::optional<double> horizon;
  /// Trace path for a single seed. With several seeds, traces go to out_dir.
  std::optional<std::filesystem::path> output;
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;
  bool json = false;
};

struct CheckOptions {
  std::filesystem::path config;
  std::optional<double> horizon;
  bool json = false;
};

struct ValidateOptions {
  std::filesystem::path config;
  std::vector<std::filesystem::path> traces;
  std::optional<double> alpha;
  bool json = false;
};

struct CoupleOptions {
  std::filesystem::path config;
  std::filesystem::path dominating;
  std::optional<std::string> seeds;
  std::optional<double> horizon;
  unsigned workers = 1;
  bool json = false;
};

struct IntensityPathOptions {
  std::filesystem::path config;
  std::filesystem::path trace;
  std::size_t points = 1000;
  std::optional<std::filesystem::path> output;
};

/// Trace file name used for `seed` in a sweep.
std::string trace_file_name(std::uint64_t seed);

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_couple(const CoupleOptions& opt, std::ostream& out, std::ostream& err);
int cmd_intensity_path(const IntensityPathOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace hmpp::cli
