#include "fsburgers/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "fsburgers/csv.hpp"
#include "fsburgers/specfun.hpp"

namespace fsburgers::cli {

namespace {

struct CommandName {
  Command command;
  std::string_view name;
};

constexpr CommandName kCommands[] = {
    {Command::simulate, "simulate"},
    {Command::picard, "picard"},
    {Command::regularity, "regularity"},
    {Command::moments, "moments"},
    {Command::operator_bounds, "operator-bounds"},
    {Command::verify_specfun, "verify-specfun"},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Value errors carry only the message; the parser adds the line.
struct ValueError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ValueError(std::string(key) + " expects a number (got '" + std::string(text) + "')");
  }
  return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ValueError(std::string(key) + " expects a non-negative integer (got '" + std::string(text) + "')");
  }
  return v;
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(to_double(key, trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

bool to_switch(std::string_view key, std::string_view text) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw ValueError(std::string(key) + " expects on/off (got '" + std::string(text) + "')");
}

[[noreturn]] void range_error(std::string_view key, std::string_view constraint, std::string_view text) {
  throw ValueError(std::string(key) + " must " + std::string(constraint) + " (got " + std::string(text) + ")");
}

double positive(std::string_view key, std::string_view text) {
  const double v = to_double(key, text);
  if (!(v > 0.0)) range_error(key, "be > 0", text);
  return v;
}

double non_negative(std::string_view key, std::string_view text) {
  const double v = to_double(key, text);
  if (!(v >= 0.0)) range_error(key, "be >= 0", text);
  return v;
}

std::size_t at_least(std::string_view key, std::string_view text, std::uint64_t lo) {
  const std::uint64_t v = to_unsigned(key, text);
  if (v < lo) range_error(key, "be >= " + std::to_string(lo), text);
  return static_cast<std::size_t>(v);
}

struct Draft {
  RunConfig config;
  std::size_t n_modes = 32;
  std::optional<std::size_t> grid_size;
  std::map<std::string, std::size_t, std::less<>> lines;

  std::size_t line_of(std::string_view key) const {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  }
};

using Setter = std::function<void(std::string_view, Draft&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"command", [](std::string_view v, Draft& d) { d.config.command = parse_command(v); }},
      {"alpha",
       [](std::string_view v, Draft& d) {
         const double a = to_double("alpha", v);
         if (!(a > 1.0 && a <= 2.0)) range_error("alpha", "be in (1,2]", v);
         d.config.model.alpha = a;
       }},
      {"beta",
       [](std::string_view v, Draft& d) {
         const double b = to_double("beta", v);
         if (!(b > 0.0 && b <= 1.0)) range_error("beta", "be in (0,1]", v);
         d.config.model.beta = b;
       }},
      {"nu", [](std::string_view v, Draft& d) { d.config.model.nu = non_negative("nu", v); }},
      {"n_modes", [](std::string_view v, Draft& d) { d.n_modes = at_least("n_modes", v, 1); }},
      {"grid_size", [](std::string_view v, Draft& d) { d.grid_size = at_least("grid_size", v, 1); }},
      {"dt", [](std::string_view v, Draft& d) { d.config.model.dt = positive("dt", v); }},
      {"n_steps", [](std::string_view v, Draft& d) { d.config.model.n_steps = at_least("n_steps", v, 1); }},
      {"sigma", [](std::string_view v, Draft& d) { d.config.model.noise.sigma = non_negative("sigma", v); }},
      {"coupling",
       [](std::string_view v, Draft& d) {
         try {
           d.config.model.noise.coupling = parse_coupling(v);
         } catch (const std::invalid_argument& e) {
           throw ValueError(e.what());
         }
       }},
      {"q_decay",
       [](std::string_view v, Draft& d) {
         const double q = to_double("q_decay", v);
         if (!(q > 1.0)) range_error("q_decay", "be > 1 for a trace-class Q", v);
         d.config.model.noise.q_decay = q;
       }},
      {"q_scale", [](std::string_view v, Draft& d) { d.config.model.noise.q_scale = non_negative("q_scale", v); }},
      {"nonlinearity",
       [](std::string_view v, Draft& d) { d.config.model.nonlinearity_enabled = to_switch("nonlinearity", v); }},
      {"nonlinearity_sign",
       [](std::string_view v, Draft& d) {
         const double s = to_double("nonlinearity_sign", v);
         if (s != 1.0 && s != -1.0) range_error("nonlinearity_sign", "be +1 or -1", v);
         d.config.model.nonlinearity_sign = s;
       }},
      {"u0", [](std::string_view v, Draft& d) { d.config.u0 = to_list("u0", v); }},
      {"p",
       [](std::string_view v, Draft& d) {
         const std::size_t p = at_least("p", v, 2);
         if (p % 2 != 0 || p > 64) range_error("p", "be an even integer in [2,64]", v);
         d.config.p = static_cast<int>(p);
       }},
      {"s", [](std::string_view v, Draft& d) { d.config.s = to_double("s", v); }},
      {"times", [](std::string_view v, Draft& d) { d.config.times = to_list("times", v); }},
      {"base_time", [](std::string_view v, Draft& d) { d.config.base_time = non_negative("base_time", v); }},
      {"lags", [](std::string_view v, Draft& d) { d.config.lags = to_list("lags", v); }},
      {"n_paths", [](std::string_view v, Draft& d) { d.config.n_paths = at_least("n_paths", v, 1); }},
      {"seed", [](std::string_view v, Draft& d) { d.config.seed = to_unsigned("seed", v); }},
      {"max_iter", [](std::string_view v, Draft& d) { d.config.max_iter = at_least("max_iter", v, 1); }},
      {"tol", [](std::string_view v, Draft& d) { d.config.tol = positive("tol", v); }},
      {"scan_alphas", [](std::string_view v, Draft& d) { d.config.scan.alphas = to_list("scan_alphas", v); }},
      {"scan_betas", [](std::string_view v, Draft& d) { d.config.scan.betas = to_list("scan_betas", v); }},
      {"scan_nus", [](std::string_view v, Draft& d) { d.config.scan.nus = to_list("scan_nus", v); }},
      {"scan_times", [](std::string_view v, Draft& d) { d.config.scan.times = to_list("scan_times", v); }},
      {"scan_pair_times",
       [](std::string_view v, Draft& d) { d.config.scan.pair_times = to_list("scan_pair_times", v); }},
      {"n_fields", [](std::string_view v, Draft& d) { d.config.scan.n_fields = at_least("n_fields", v, 0); }},
      {"verify_betas", [](std::string_view v, Draft& d) { d.config.verify_betas = to_list("verify_betas", v); }},
      {"verify_tol", [](std::string_view v, Draft& d) { d.config.verify_tol = positive("verify_tol", v); }},
      {"output",
       [](std::string_view v, Draft& d) {
         if (v.empty() || v.find('/') != std::string_view::npos || v == "." || v == "..") {
           throw ValueError("output must be a plain file name (got '" + std::string(v) + "')");
         }
         d.config.output = std::string(v);
       }},
      {"threads",
       [](std::string_view v, Draft& d) { d.config.threads = static_cast<unsigned>(at_least("threads", v, 0)); }},
  };
  return table;
}

void check_range_list(const Draft& d, std::string_view key, const std::vector<double>& values, double lo,
                      bool lo_open, double hi) {
  for (double v : values) {
    const bool ok = (lo_open ? v > lo : v >= lo) && v <= hi;
    if (!ok) {
      std::ostringstream os;
      os << key << " entries must lie in " << (lo_open ? "(" : "[") << lo << "," << hi << "] (got " << v << ")";
      throw ConfigError(d.line_of(key), os.str());
    }
  }
}

/// Cross-field checks, after every line has been read.
void finish(Draft& d) {
  RunConfig& c = d.config;
  ModelParams& m = c.model;
  if (!(m.nu < m.alpha)) {
    std::ostringstream os;
    os << "nu must satisfy 0 <= nu < alpha (got nu=" << m.nu << ", alpha=" << m.alpha << ")";
    throw ConfigError(d.line_of("nu") ? d.line_of("nu") : d.line_of("alpha"), os.str());
  }
  const std::size_t grid = d.grid_size.value_or(dealiased_grid_size(d.n_modes));
  if (2 * grid < 3 * d.n_modes) {
    throw ConfigError(d.line_of("grid_size"), "grid_size must be >= 3*n_modes/2 (got grid_size=" +
                                                  std::to_string(grid) + ", n_modes=" + std::to_string(d.n_modes) + ")");
  }
  m.basis = make_basis(d.n_modes, grid);
  if (c.u0.size() > d.n_modes) {
    throw ConfigError(d.line_of("u0"), "u0 has " + std::to_string(c.u0.size()) + " coefficients but n_modes is " +
                                           std::to_string(d.n_modes));
  }
  check_range_list(d, "scan_alphas", c.scan.alphas, 1.0, true, 2.0);
  check_range_list(d, "scan_betas", c.scan.betas, 0.0, true, 1.0);
  check_range_list(d, "scan_times", c.scan.times, 0.0, true, 1.0);
  check_range_list(d, "scan_pair_times", c.scan.pair_times, 0.0, true, 1.0);
  check_range_list(d, "verify_betas", c.verify_betas, 0.0, true, 1.0 - 1e-12);
  for (double nu : c.scan.nus) {
    for (double a : c.scan.alphas) {
      if (!(nu >= 0.0 && nu < a)) {
        std::ostringstream os;
        os << "scan_nus entries must satisfy 0 <= nu < alpha for every scan alpha (got nu=" << nu << ", alpha=" << a
           << ")";
        throw ConfigError(d.line_of("scan_nus"), os.str());
      }
    }
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
}

std::filesystem::path write_csv(const std::filesystem::path& dir, const std::string& name,
                                const std::function<void(std::ostream&)>& body) {
  const std::filesystem::path path = dir / name;
  csv::write_atomically(path, body);
  return path;
}

std::string summary_name(const std::string& main) {
  const std::filesystem::path p(main);
  return p.stem().string() + "_summary" + p.extension().string();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

Command parse_command(std::string_view name) {
  for (const auto& c : kCommands) {
    if (c.name == name) return c.command;
  }
  throw std::invalid_argument("unknown command '" + std::string(name) +
                              "' (expected simulate, picard, regularity, moments, operator-bounds or verify-specfun)");
}

std::string_view to_string(Command c) {
  for (const auto& k : kCommands) {
    if (k.command == c) return k.name;
  }
  return "unknown";
}

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::invalid_argument(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

SpectralField RunConfig::initial_field() const {
  SpectralField u(model.basis.n_modes());
  for (std::size_t i = 0; i < u0.size() && i < u.size(); ++i) u[i] = u0[i];
  return u;
}

std::string RunConfig::output_name() const {
  return output.empty() ? std::string(to_string(command)) + ".csv" : output;
}

RunConfig parse_config(std::string_view text) {
  Draft d;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos <= text.size();) {
    ++line_no;
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected key=value (got '" + std::string(line) + "')");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line_no, "unknown key '" + std::string(key) + "'");
    if (d.lines.count(key)) {
      throw ConfigError(line_no, "duplicate key '" + std::string(key) + "' (first set on line " +
                                     std::to_string(d.line_of(key)) + ")");
    }
    d.lines.emplace(std::string(key), line_no);
    try {
      it->second(value, d);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_no, e.what());
    }
  }
  finish(d);
  return d.config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err) {
  const std::string name(to_string(config.command));
  try {
    std::filesystem::create_directories(out_dir);
    const ModelParams& model = config.model;
    const SpectralField u0 = config.initial_field();
    const std::string out_name = config.output_name();

    switch (config.command) {
      case Command::simulate: {
        const KernelTable table = make_kernel_table(model);
        const NoisePath path = sample_path(model.noise, model.basis, model.dt, model.n_steps, config.seed, 0);
        const Trajectory traj = step_scheme(model, u0, path, table);
        const auto main = write_csv(out_dir, out_name, [&](std::ostream& o) { write_trajectory_csv(o, traj); });
        const auto summary = write_csv(out_dir, summary_name(out_name),
                                       [&](std::ostream& o) { write_trajectory_summary_csv(o, traj, model); });
        out << "simulate: " << model.n_steps << " steps to T=" << fmt(model.final_time())
            << ", ||u(T)||=" << fmt(l2_norm(traj.fields.back())) << "; wrote " << main.string() << ", "
            << summary.string() << '\n';
        return kExitOk;
      }
      case Command::picard: {
        const PicardStudy study = picard_convergence_study(model, u0, config.seed, config.max_iter, config.tol);
        const auto file = write_csv(out_dir, out_name, [&](std::ostream& o) { write_picard_csv(o, study); });
        out << "picard: " << study.sup_differences.size() << " iterations, converged="
            << (study.converged ? "true" : "false") << ", last difference="
            << fmt(study.sup_differences.back()) << ", deviation from step scheme="
            << fmt(study.step_scheme_deviation) << "; wrote " << file.string() << '\n';
        return kExitOk;
      }
      case Command::regularity: {
        const double base = config.base_time >= 0.0
                                ? config.base_time
                                : static_cast<double>(model.n_steps / 2) * model.dt;
        const std::vector<double> lags = config.lags.empty() ? default_lags(model, base) : config.lags;
        const HolderFit fit = holder_exponent(model, u0, config.p, config.s, base, lags, config.n_paths,
                                              config.seed, config.threads);
        const auto file = write_csv(out_dir, out_name, [&](std::ostream& o) { write_holder_csv(o, fit); });
        out << "regularity: slope=" << fmt(fit.slope) << " +- " << fmt(fit.ci_half_width) << " (95%), theory gamma="
            << (fit.vacuous ? std::string("vacuous") : fmt(fit.gamma_theory)) << "; wrote " << file.string() << '\n';
        return kExitOk;
      }
      case Command::moments: {
        std::vector<double> times = config.times;
        if (times.empty()) {
          for (std::size_t q = 1; q <= 4; ++q) times.push_back(static_cast<double>(q * model.n_steps / 4) * model.dt);
        }
        const MomentReport report = moment_estimate(model, u0, config.p, config.s, times, config.n_paths,
                                                    config.seed, config.threads);
        const auto file =
            write_csv(out_dir, out_name, [&](std::ostream& o) { write_moments_csv(o, report.estimates); });
        double peak = 0.0;
        for (const auto& e : report.estimates) peak = std::max(peak, e.mean);
        out << "moments: " << report.estimates.size() << " times, max mean=" << fmt(peak) << ", "
            << report.blown_up_paths.size() << " blown-up paths excluded; wrote " << file.string() << '\n';
        return kExitOk;
      }
      case Command::operator_bounds: {
        ScanConfig scan = config.scan;
        scan.n_modes = model.basis.n_modes();
        scan.seed = config.seed;
        const std::vector<ScanRow> rows = operator_bound_scan(scan);
        const auto file = write_csv(out_dir, out_name, [&](std::ostream& o) { write_scan_csv(o, rows); });
        out << "operator-bounds: " << rows.size() << " rows; wrote " << file.string() << '\n';
        return kExitOk;
      }
      case Command::verify_specfun: {
        const auto reports = specfun::verify_identities(config.verify_betas, config.verify_tol);
        const auto file =
            write_csv(out_dir, out_name, [&](std::ostream& o) { specfun::write_reports_csv(o, reports); });
        std::size_t failed = 0;
        for (const auto& r : reports) failed += r.pass ? 0 : 1;
        out << "verify-specfun: " << reports.size() - failed << "/" << reports.size() << " identities pass; wrote "
            << file.string() << '\n';
        return failed == 0 ? kExitOk : kExitCheckFailed;
      }
    }
    return kExitConfigError;
  } catch (const BlowUpError& e) {
    err << name << ": blow-up: " << e.what() << '\n';
    return kExitBlowUp;
  } catch (const std::invalid_argument& e) {
    err << name << ": error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << name << ": error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace fsburgers::cli
