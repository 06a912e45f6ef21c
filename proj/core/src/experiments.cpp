#include "fsburgers/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "fsburgers/csv.hpp"
#include "fsburgers/specfun.hpp"

namespace fsburgers {

namespace {

constexpr double kGridSlack = 1e-9;

/// Index k with t = k dt, or throws.
std::size_t grid_index(double t, const ModelParams& params, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(what) + " must be >= 0 (got " + csv::format_number(t) + ")");
  }
  const double x = t / params.dt;
  const double k = std::round(x);
  if (std::abs(x - k) > kGridSlack * std::max(1.0, x)) {
    throw std::invalid_argument(std::string(what) + " " + csv::format_number(t) +
                                " is not a multiple of dt=" + csv::format_number(params.dt));
  }
  if (k > static_cast<double>(params.n_steps)) {
    throw std::invalid_argument(std::string(what) + " " + csv::format_number(t) +
                                " exceeds the final time " + csv::format_number(params.final_time()));
  }
  return static_cast<std::size_t>(k);
}

void require_even_p(int p) {
  if (p < 2 || p % 2 != 0) {
    throw std::invalid_argument("p must be an even integer >= 2 (got " + std::to_string(p) + ")");
  }
}

/// ||v||_{H^s}^p for even p, without a pow() on the norm.
double norm_power(const SpectralField& v, double s, int p, const SpectralBasis& basis) {
  double sq = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) sq += std::pow(basis.eigenvalues()[n], s) * v[n] * v[n];
  double out = 1.0;
  for (int i = 0; i < p / 2; ++i) out *= sq;
  return out;
}

/// Per-path Monte Carlo values in path order; blown-up paths are flagged.
struct PathRun {
  std::size_t width = 0;
  std::vector<double> values;  // [path][width]
  std::vector<char> ok;
  std::vector<std::uint64_t> blown_up;
  std::size_t first_blow_up_step = 0;
};

template <typename Observe>
PathRun run_paths(const ModelParams& params, const SpectralField& u0, const KernelTable& table,
                  std::size_t n_paths, std::uint64_t seed, unsigned n_threads, std::size_t width,
                  Observe observe) {
  PathRun run;
  run.width = width;
  run.values.assign(n_paths * width, 0.0);
  run.ok.assign(n_paths, 1);
  std::vector<std::size_t> blow_step(n_paths, 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n_paths; i = next++) {
      try {
        const NoisePath path = sample_path(params.noise, params.basis, params.dt, params.n_steps, seed, i);
        const Trajectory traj = step_scheme(params, u0, path, table);
        observe(traj, run.values.data() + i * width);
      } catch (const BlowUpError& e) {
        run.ok[i] = 0;
        blow_step[i] = e.step();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_paths));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < n_paths; ++i) {
    if (run.ok[i]) continue;
    if (run.blown_up.empty()) run.first_blow_up_step = blow_step[i];
    run.blown_up.push_back(i);
  }
  if (100 * run.blown_up.size() > n_paths) {
    throw TooManyBlowUps(run.first_blow_up_step, run.blown_up.size(), n_paths);
  }
  return run;
}

/// Mean and standard error of column c over the surviving paths, in path order.
void column_stats(const PathRun& run, std::size_t c, double& mean, double& std_error, std::size_t& count) {
  count = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < run.ok.size(); ++i) {
    if (!run.ok[i]) continue;
    sum += run.values[i * run.width + c];
    ++count;
  }
  mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (std::size_t i = 0; i < run.ok.size(); ++i) {
    if (!run.ok[i]) continue;
    const double d = run.values[i * run.width + c] - mean;
    ss += d * d;
  }
  std_error = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count)) : 0.0;
}

Trajectory deterministic_run(const ModelParams& params, const SpectralField& u0, const KernelTable& table) {
  return step_scheme(params, u0, NoisePath::zeros(params.basis.n_modes(), params.n_steps, params.dt), table);
}

}  // namespace

TooManyBlowUps::TooManyBlowUps(std::size_t first_step, std::size_t count, std::size_t n_paths)
    : BlowUpError(first_step, std::to_string(count) + " of " + std::to_string(n_paths) +
                                  " paths blew up (limit 1%); first at step " +
                                  std::to_string(first_step)) {}

MomentReport moment_estimate(const ModelParams& params, const SpectralField& u0, int p, double s,
                             const std::vector<double>& times, std::size_t n_paths,
                             std::uint64_t seed, unsigned n_threads) {
  params.validate();
  require_even_p(p);
  if (n_paths < 2) {
    throw std::invalid_argument("n_paths must be >= 2 for a standard error (got " + std::to_string(n_paths) + ")");
  }
  if (times.empty()) throw std::invalid_argument("moment_estimate: no times requested");
  std::vector<std::size_t> ks;
  for (double t : times) ks.push_back(grid_index(t, params, "time"));

  const KernelTable table = make_kernel_table(params);
  MomentReport report;

  if (params.noise.silent()) {
    const Trajectory traj = deterministic_run(params, u0, table);
    for (std::size_t m = 0; m < ks.size(); ++m) {
      report.estimates.push_back({times[m], p, s, norm_power(traj.fields[ks[m]], s, p, params.basis), 0.0, n_paths});
    }
    return report;
  }

  const PathRun run = run_paths(params, u0, table, n_paths, seed, n_threads, ks.size(),
                                [&](const Trajectory& traj, double* out) {
                                  for (std::size_t m = 0; m < ks.size(); ++m) {
                                    out[m] = norm_power(traj.fields[ks[m]], s, p, params.basis);
                                  }
                                });
  for (std::size_t m = 0; m < ks.size(); ++m) {
    MomentEstimate e{times[m], p, s, 0.0, 0.0, 0};
    column_stats(run, m, e.mean, e.std_error, e.n_paths);
    report.estimates.push_back(e);
  }
  report.blown_up_paths = run.blown_up;
  return report;
}

double holder_gamma_theory(double alpha, double beta, double nu, int p) {
  const double pd = static_cast<double>(p);
  const double a = beta * nu / alpha;
  const double b = (pd * beta * (alpha - nu - 1.0) - alpha) / (pd * alpha);
  const double c = (2.0 * pd * beta * (alpha - nu) - (pd + 2.0) * alpha) / (2.0 * pd * alpha);
  return std::min({a, b, c});
}

void fit_log_log(const std::vector<double>& lags, const std::vector<double>& moments, double& slope,
                 double& ci_half_width) {
  const std::size_t n = lags.size();
  if (n < 3 || moments.size() != n) throw std::invalid_argument("fit_log_log: need >= 3 matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(lags[i]);
    my += std::log(moments[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(lags[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(moments[i]) - my);
  }
  slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(moments[i]) - my - slope * (std::log(lags[i]) - mx);
    rss += r * r;
  }
  const double dof = static_cast<double>(n - 2);
  const boost::math::students_t dist(dof);
  ci_half_width = boost::math::quantile(dist, 0.975) * std::sqrt(rss / dof / sxx);
}

std::vector<double> default_lags(const ModelParams& params, double base_time) {
  std::vector<double> lags;
  const std::size_t k0 = grid_index(base_time, params, "base_time");
  for (std::size_t m = 4; k0 + m <= params.n_steps; m *= 2) lags.push_back(static_cast<double>(m) * params.dt);
  return lags;
}

HolderFit holder_exponent(const ModelParams& params, const SpectralField& u0, int p, double s,
                          double base_time, const std::vector<double>& lags, std::size_t n_paths,
                          std::uint64_t seed, unsigned n_threads) {
  params.validate();
  require_even_p(p);
  if (lags.size() < 4) {
    throw std::invalid_argument("holder_exponent: need at least 4 lags (got " + std::to_string(lags.size()) + ")");
  }
  const std::size_t k0 = grid_index(base_time, params, "base_time");
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (!(lags[i] > 0.0)) throw std::invalid_argument("holder_exponent: lags must be > 0");
    if (i > 0 && std::abs(lags[i] - 2.0 * lags[i - 1]) > kGridSlack * lags[i]) {
      throw std::invalid_argument("holder_exponent: lags must be dyadic and increasing (each twice the previous)");
    }
    offsets.push_back(grid_index(base_time + lags[i], params, "base_time + lag") - k0);
  }
  if (!params.noise.silent() && n_paths < 2) {
    throw std::invalid_argument("n_paths must be >= 2 (got " + std::to_string(n_paths) + ")");
  }

  const KernelTable table = make_kernel_table(params);
  auto observe = [&](const Trajectory& traj, double* out) {
    for (std::size_t m = 0; m < offsets.size(); ++m) {
      out[m] = norm_power(traj.fields[k0 + offsets[m]] - traj.fields[k0], s, p, params.basis);
    }
  };

  HolderFit fit;
  fit.lags = lags;
  std::vector<double> means(lags.size());
  if (params.noise.silent()) {
    observe(deterministic_run(params, u0, table), means.data());
  } else {
    const PathRun run = run_paths(params, u0, table, n_paths, seed, n_threads, lags.size(), observe);
    for (std::size_t m = 0; m < lags.size(); ++m) {
      double se = 0.0;
      std::size_t count = 0;
      column_stats(run, m, means[m], se, count);
    }
  }
  for (std::size_t m = 0; m < lags.size(); ++m) {
    if (!(means[m] > 0.0)) {
      throw std::runtime_error("holder_exponent: increment moment is zero at lag " + csv::format_number(lags[m]) +
                               " (degenerate configuration)");
    }
    fit.moments.push_back(std::pow(means[m], 1.0 / static_cast<double>(p)));
  }
  fit_log_log(fit.lags, fit.moments, fit.slope, fit.ci_half_width);
  const double gamma = holder_gamma_theory(params.alpha, params.beta, s, p);
  fit.vacuous = gamma < 0.0;
  fit.gamma_theory = std::max(0.0, gamma);
  return fit;
}

// ---------------------------------------------------------------------------

ScanConfig ScanConfig::with_default_grids() {
  ScanConfig c;
  for (int j = 0; j <= 10; ++j) c.times.push_back(std::ldexp(1.0, -j));
  for (int i = 1; i <= 10; ++i) c.pair_times.push_back(0.1 * i);
  return c;
}

std::vector<ScanRow> operator_bound_scan(const ScanConfig& config) {
  if (config.alphas.empty() || config.betas.empty() || config.nus.empty() || config.times.empty() ||
      config.pair_times.empty()) {
    throw std::invalid_argument("operator_bound_scan: every grid must be non-empty");
  }
  for (double t : config.times) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("operator_bound_scan: times must lie in (0,1]");
  }
  for (double t : config.pair_times) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("operator_bound_scan: pair times must lie in (0,1]");
  }
  if (config.n_modes < 1) throw std::invalid_argument("operator_bound_scan: n_modes must be >= 1");

  const std::size_t n_modes = config.n_modes;
  const SpectralBasis basis = make_basis(n_modes, dealiased_grid_size(n_modes));
  const auto lambda = basis.eigenvalues();

  std::vector<SpectralField> fields;
  for (std::size_t n = 1; n <= n_modes; ++n) fields.push_back(SpectralField::unit(n_modes, n));
  for (std::size_t i = 0; i < config.n_fields; ++i) {
    SpectralField f = random_field(n_modes, config.seed, static_cast<std::uint32_t>(i));
    const double norm = l2_norm(f);
    if (norm > 0.0) fields.push_back((1.0 / norm) * f);
  }

  std::vector<double> pairs = config.pair_times;
  std::sort(pairs.begin(), pairs.end());

  // Mode multipliers kernel(n) at time t.
  auto multipliers = [&](double alpha, double beta, double rho, double t) {
    std::vector<double> m(n_modes);
    const double tb = std::pow(t, beta);
    for (std::size_t n = 0; n < n_modes; ++n) {
      m[n] = specfun::mittag_leffler2(beta, rho, -std::pow(lambda[n], 0.5 * alpha) * tb);
    }
    return m;
  };
  // sup over unit fields of ||diag(m) v||_{H^nu}.
  auto sup_norm = [&](const std::vector<double>& m, double nu) {
    double worst = 0.0;
    for (const SpectralField& v : fields) {
      double sq = 0.0;
      for (std::size_t n = 0; n < n_modes; ++n) sq += std::pow(lambda[n], nu) * m[n] * m[n] * v[n] * v[n];
      worst = std::max(worst, std::sqrt(sq));
    }
    return worst;
  };

  std::vector<ScanRow> rows;
  for (double alpha : config.alphas) {
    for (double beta : config.betas) {
      validate_fractional_orders(alpha, beta);
      for (const auto& [label, rho] : {std::pair<const char*, double>{"E_beta", 1.0}, {"E_beta_beta", beta}}) {
        std::vector<std::vector<double>> at_times, at_pairs;
        for (double t : config.times) at_times.push_back(multipliers(alpha, beta, rho, t));
        for (double t : pairs) at_pairs.push_back(multipliers(alpha, beta, rho, t));

        for (double nu : config.nus) {
          if (!(nu >= 0.0 && nu < alpha)) {
            throw std::invalid_argument("operator_bound_scan: nu must satisfy 0 <= nu < alpha (got nu=" +
                                        csv::format_number(nu) + ")");
          }
          const double e = beta * nu / alpha;
          double weighted = 0.0;
          for (std::size_t i = 0; i < config.times.size(); ++i) {
            weighted = std::max(weighted, std::pow(config.times[i], e) * sup_norm(at_times[i], nu));
          }
          double holder = 0.0, lipschitz = 0.0;
          for (std::size_t i = 0; i < pairs.size(); ++i) {
            for (std::size_t j = i + 1; j < pairs.size(); ++j) {
              const double h = pairs[j] - pairs[i];
              if (!(h > 0.0)) continue;
              std::vector<double> d(n_modes);
              for (std::size_t n = 0; n < n_modes; ++n) d[n] = at_pairs[j][n] - at_pairs[i][n];
              const double norm = sup_norm(d, nu);
              holder = std::max(holder, norm / std::pow(h, e));
              lipschitz = std::max(lipschitz, norm / h);
            }
          }
          const std::string op(label);
          rows.push_back({alpha, beta, nu, op + ".weighted_sup", weighted});
          rows.push_back({alpha, beta, nu, op + ".holder_quotient", holder});
          rows.push_back({alpha, beta, nu, op + ".lipschitz_quotient", lipschitz});
        }
      }
    }
  }
  return rows;
}

PicardStudy picard_convergence_study(const ModelParams& params, const SpectralField& u0,
                                     std::uint64_t seed, std::size_t max_iter, double tol) {
  const KernelTable table = make_kernel_table(params);
  const NoisePath path = sample_path(params.noise, params.basis, params.dt, params.n_steps, seed, 0);
  const PicardResult picard = picard_solve(params, u0, path, table, max_iter, tol);
  const Trajectory direct = step_scheme(params, u0, path, table);

  PicardStudy study;
  study.sup_differences = picard.sup_differences;
  study.converged = picard.converged;
  const Trajectory& last = picard.iterates.back();
  for (std::size_t k = 0; k < direct.fields.size(); ++k) {
    study.step_scheme_deviation = std::max(study.step_scheme_deviation, l2_norm(last.fields[k] - direct.fields[k]));
  }
  return study;
}

// ---------------------------------------------------------------------------

void write_moments_csv(std::ostream& out, const std::vector<MomentEstimate>& estimates) {
  csv::Writer w(out);
  w.header({"t", "p", "s", "mean", "stderr", "n_paths"});
  for (const auto& e : estimates) w.row(e.t, e.p, e.s, e.mean, e.std_error, e.n_paths);
}

void write_holder_csv(std::ostream& out, const HolderFit& fit) {
  csv::Writer w(out);
  w.header({"lag", "moment", "slope", "ci", "gamma_theory"});
  const std::string gamma = fit.vacuous ? "vacuous" : csv::format_number(fit.gamma_theory);
  for (std::size_t i = 0; i < fit.lags.size(); ++i) {
    w.row(fit.lags[i], fit.moments[i], fit.slope, fit.ci_half_width, gamma);
  }
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  csv::Writer w(out);
  w.header({"alpha", "beta", "nu", "quantity", "value"});
  for (const auto& r : rows) w.row(r.alpha, r.beta, r.nu, r.quantity, r.value);
}

void write_picard_csv(std::ostream& out, const PicardStudy& study) {
  csv::Writer w(out);
  w.header({"iteration", "sup_difference", "converged", "step_scheme_deviation"});
  for (std::size_t i = 0; i < study.sup_differences.size(); ++i) {
    w.row(i + 1, study.sup_differences[i], study.converged, study.step_scheme_deviation);
  }
}

}  // namespace fsburgers
