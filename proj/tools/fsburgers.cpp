// fsburgers <command> [config] [--seed N] [--paths N] [--out-dir DIR]
//
// Output directory: --out-dir, else $FSBURGERS_OUT_DIR, else ".".

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fsburgers/cli.hpp"

namespace cli = fsburgers::cli;

int main(int argc, char** argv) {
  CLI::App app{"Time-space fractional stochastic Burgers laboratory"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::string out_dir;

  const char* commands[][2] = {
      {"simulate", "one trajectory of the time-stepping scheme"},
      {"picard", "Picard iteration against the direct scheme on one path"},
      {"regularity", "temporal Hölder exponent fit"},
      {"moments", "Monte Carlo moments of the Sobolev norm"},
      {"operator-bounds", "Mittag-Leffler operator bound scan"},
      {"verify-specfun", "special-function identity checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "key=value config file (defaults when omitted)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed override");
    sub->add_option("--paths", paths, "n_paths override")->check(CLI::PositiveNumber);
    sub->add_option("--out-dir", out_dir, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  cli::RunConfig config;
  try {
    config = config_path.empty() ? cli::parse_config("") : cli::load_config(config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << command << ": config error: " << e.what() << '\n';
    return cli::kExitConfigError;
  }
  config.command = cli::parse_command(command);
  if (seed) config.seed = *seed;
  if (paths) config.n_paths = *paths;

  if (out_dir.empty()) {
    const char* env = std::getenv("FSBURGERS_OUT_DIR");
    out_dir = env && *env ? env : ".";
  }
  return cli::run(config, out_dir, std::cout, std::cerr);
}
