#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "fsburgers/cli.hpp"

using namespace fsburgers;
using namespace fsburgers::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("fsburgers_cli_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string config_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

constexpr const char* kSmall =
    "n_modes = 8\n"
    "dt = 0.001\n"
    "n_steps = 100\n"
    "n_paths = 8\n"
    "scan_alphas = 1.5\n"
    "scan_betas = 0.5\n"
    "threads = 2\n";

}  // namespace

TEST(Commands, Names) {
  EXPECT_EQ(parse_command("operator-bounds"), Command::operator_bounds);
  EXPECT_EQ(to_string(Command::verify_specfun), "verify-specfun");
  EXPECT_THROW(parse_command("solve"), std::invalid_argument);
}

TEST(Config, Defaults) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.command, Command::simulate);
  EXPECT_EQ(c.model.alpha, 1.5);
  EXPECT_EQ(c.model.beta, 0.5);
  EXPECT_EQ(c.model.basis.n_modes(), 32u);
  EXPECT_EQ(c.model.basis.grid_size(), 48u);
  EXPECT_EQ(c.model.n_steps, 500u);
  EXPECT_EQ(c.n_paths, 100u);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.output_name(), "simulate.csv");
  const SpectralField u0 = c.initial_field();
  EXPECT_EQ(u0[0], 1.0);
  EXPECT_EQ(u0[1], 0.5);
  EXPECT_EQ(u0[2], 0.0);
}

TEST(Config, ParsesEveryKind) {
  const RunConfig c = parse_config(
      "# moments run\n"
      "command = moments\n"
      "alpha = 1.8   # trailing comment\n"
      "beta=0.9\n"
      "nu = 0.5\n"
      "n_modes = 16\n"
      "coupling = additive\n"
      "nonlinearity = off\n"
      "nonlinearity_sign = -1\n"
      "u0 = 0, 1, 0.25\n"
      "p = 4\n"
      "times = 0.1, 0.2\n"
      "output = m.csv\n");
  EXPECT_EQ(c.command, Command::moments);
  EXPECT_EQ(c.model.alpha, 1.8);
  EXPECT_EQ(c.model.beta, 0.9);
  EXPECT_EQ(c.model.nu, 0.5);
  EXPECT_EQ(c.model.basis.grid_size(), 24u);
  EXPECT_EQ(c.model.noise.coupling, Coupling::additive);
  EXPECT_FALSE(c.model.nonlinearity_enabled);
  EXPECT_EQ(c.model.nonlinearity_sign, -1.0);
  EXPECT_EQ(c.initial_field()[2], 0.25);
  EXPECT_EQ(c.p, 4);
  EXPECT_EQ(c.times.size(), 2u);
  EXPECT_EQ(c.output_name(), "m.csv");
}

TEST(Config, ErrorsNameTheLine) {
  EXPECT_EQ(config_error("alpha = 2.5\n"), "line 1: alpha must be in (1,2] (got 2.5)");
  EXPECT_EQ(config_error("\nbeta = 0\n").rfind("line 2: ", 0), 0u);
  EXPECT_EQ(config_error("alpha = 1.5\nalpha = 1.6\n").rfind("line 2: duplicate key 'alpha'", 0), 0u);
  EXPECT_EQ(config_error("# x\n\nfoo = 1\n"), "line 3: unknown key 'foo'");
  EXPECT_EQ(config_error("alpha\n").rfind("line 1: expected key=value", 0), 0u);
  EXPECT_EQ(config_error("n_modes = 8\nnu = 1.5\n").rfind("line 2: nu must satisfy", 0), 0u);
  EXPECT_EQ(config_error("n_modes = 8\ngrid_size = 11\n").rfind("line 2: grid_size", 0), 0u);
  EXPECT_EQ(config_error("n_modes = 2\nu0 = 1, 2, 3\n").rfind("line 2: u0 has 3", 0), 0u);
  EXPECT_EQ(config_error("p = 3\n").rfind("line 1: ", 0), 0u);
  EXPECT_EQ(config_error("dt = abc\n").rfind("line 1: dt expects a number", 0), 0u);
  EXPECT_EQ(config_error("output = ../x.csv\n").rfind("line 1: ", 0), 0u);
  EXPECT_EQ(config_error("command = solve\n").rfind("line 1: unknown command", 0), 0u);
  EXPECT_EQ(config_error("scan_nus = 1.3\n").rfind("line 1: scan_nus", 0), 0u);
  EXPECT_THROW(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST(Run, VerifySpecfunPasses) {
  TempDir dir;
  RunConfig c = parse_config("command = verify-specfun\n");
  std::ostringstream out, err;
  EXPECT_EQ(run(c, dir.path(), out, err), kExitOk);
  EXPECT_NE(out.str().find("13/13"), std::string::npos);
  EXPECT_EQ(slurp(dir.path() / "verify-specfun.csv").rfind("identity,beta,param,max_abs_err,tolerance,pass\n", 0), 0u);
  c.verify_tol = 1e-30;
  EXPECT_EQ(run(c, dir.path(), out, err), kExitCheckFailed);
}

TEST(Run, BlowUpExitCode) {
  TempDir dir;
  const RunConfig c = parse_config("sigma = 5\ndt = 0.1\nn_steps = 50\n");
  std::ostringstream out, err;
  EXPECT_EQ(run(c, dir.path(), out, err), kExitBlowUp);
  EXPECT_NE(err.str().find("step"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir.path() / "simulate.csv"));
}

TEST(Run, SinglePathMomentsRejected) {
  TempDir dir;
  RunConfig c = parse_config(std::string(kSmall) + "command = moments\n");
  c.n_paths = 1;
  std::ostringstream out, err;
  EXPECT_EQ(run(c, dir.path(), out, err), kExitConfigError);
  EXPECT_NE(err.str().find("n_paths must be >= 2"), std::string::npos);
}

TEST(Run, EveryCommandWritesReproducibleCsv) {
  TempDir a, b;
  for (const char* command : {"simulate", "picard", "regularity", "moments", "operator-bounds", "verify-specfun"}) {
    const RunConfig c = parse_config(std::string(kSmall) + "command = " + command + "\n");
    std::ostringstream out, err;
    ASSERT_EQ(run(c, a.path(), out, err), kExitOk) << command << ": " << err.str();
    ASSERT_EQ(run(c, b.path(), out, err), kExitOk) << command << ": " << err.str();
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a.path())) {
    const std::string name = entry.path().filename().string();
    EXPECT_EQ(entry.path().extension(), ".csv") << name;
    const std::string text = slurp(entry.path());
    EXPECT_EQ(text, slurp(b.path() / name)) << name;
    std::size_t lines = 0;
    for (char ch : text) lines += ch == '\n';
    EXPECT_GE(lines, 2u) << name;
    ++files;
  }
  EXPECT_EQ(files, 7u);  // simulate also writes its summary
}
