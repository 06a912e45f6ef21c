#pragma once

// Flat key=value run configuration and command dispatch.
//
//   # comment
//   alpha = 1.5
//   u0 = 1, 0.5
//
// One key per line, blank lines and '#' comments ignored, unknown or repeated
// keys rejected. Lists are comma separated.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fsburgers/experiments.hpp"
#include "fsburgers/solver.hpp"

namespace fsburgers::cli {

enum class Command { simulate, picard, regularity, moments, operator_bounds, verify_specfun };

Command parse_command(std::string_view name);
std::string_view to_string(Command c);

/// Configuration error; line() is 0 when the offending value was a default.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct RunConfig {
  Command command = Command::simulate;
  ModelParams model{};
  /// Leading coefficients of u0; the rest are zero.
  std::vector<double> u0{1.0, 0.5};
  int p = 2;
  double s = 0.0;
  /// moments: empty means T/4, T/2, 3T/4, T.
  std::vector<double> times;
  /// regularity: negative means T/2.
  double base_time = -1.0;
  /// regularity: empty means default_lags().
  std::vector<double> lags;
  std::size_t n_paths = 100;
  std::uint64_t seed = 42;
  std::size_t max_iter = 25;
  double tol = 1e-8;
  ScanConfig scan = ScanConfig::with_default_grids();
  std::vector<double> verify_betas{0.3, 0.5, 0.8};
  double verify_tol = 1e-6;
  /// Output file name; empty means <command>.csv.
  std::string output;
  /// Worker threads for Monte Carlo commands (0 = hardware concurrency).
  unsigned threads = 0;

  SpectralField initial_field() const;
  std::string output_name() const;
};

/// Parses and validates; throws ConfigError naming the first offending key
/// and its line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitBlowUp = 2;
inline constexpr int kExitCheckFailed = 3;

/// Runs the command, writes CSV files into out_dir atomically and prints a
/// one-line summary to out, or the diagnostic to err.
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

}  // namespace fsburgers::cli
