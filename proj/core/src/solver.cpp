#include "fsburgers/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "fsburgers/csv.hpp"
#include "fsburgers/specfun.hpp"

namespace fsburgers {

void ModelParams::validate() const {
  validate_fractional_orders(alpha, beta);
  if (!(nu >= 0.0 && nu < alpha)) {
    throw std::invalid_argument("nu must satisfy 0 <= nu < alpha (got nu=" + csv::format_number(nu) +
                                ", alpha=" + csv::format_number(alpha) + ")");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("dt must be > 0 (got " + csv::format_number(dt) + ")");
  }
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (nonlinearity_sign != 1.0 && nonlinearity_sign != -1.0) {
    throw std::invalid_argument("nonlinearity_sign must be +1 or -1");
  }
  noise.validate();
}

std::string ModelParams::fingerprint() const {
  std::ostringstream os;
  os << "alpha=" << csv::format_number(alpha) << ";beta=" << csv::format_number(beta)
     << ";nu=" << csv::format_number(nu) << ";n_modes=" << basis.n_modes()
     << ";grid_size=" << basis.grid_size() << ";dt=" << csv::format_number(dt)
     << ";n_steps=" << n_steps << ";sigma=" << csv::format_number(noise.sigma)
     << ";coupling=" << to_string(noise.coupling) << ";q_decay=" << csv::format_number(noise.q_decay)
     << ";q_scale=" << csv::format_number(noise.q_scale)
     << ";nonlinearity=" << (nonlinearity_enabled ? "on" : "off")
     << ";sign=" << csv::format_number(nonlinearity_sign);
  return os.str();
}

KernelTable make_kernel_table(const ModelParams& params) {
  return build_kernel_table(params.alpha, params.beta, params.dt, params.n_steps, params.basis);
}

namespace {

void check_compatible(const ModelParams& params, const SpectralField& u0, const NoisePath& path,
                      const KernelTable& table) {
  params.validate();
  const std::size_t n_modes = params.basis.n_modes();
  if (u0.size() != n_modes) throw std::invalid_argument("u0 has the wrong number of modes");
  if (!u0.all_finite()) throw std::invalid_argument("u0 has non-finite coefficients");
  if (table.alpha != params.alpha || table.beta != params.beta || table.dt != params.dt ||
      table.n_steps != params.n_steps || table.n_modes() != n_modes) {
    throw std::invalid_argument("kernel table does not match the model parameters");
  }
  if (path.n_modes != n_modes || path.n_steps != params.n_steps || path.dt != params.dt) {
    throw std::invalid_argument("noise path dimensions do not match the model parameters");
  }
}

/// Mode-major history of the frozen right-hand side F_j = +-B(u_j) + g(u_j, dW_j)/dt.
class Forcing {
 public:
  Forcing(const ModelParams& params, const NoisePath& path)
      : params_(params), path_(path), n_modes_(params.basis.n_modes()),
        n_steps_(params.n_steps), values_(n_modes_ * n_steps_, 0.0) {}

  void set(std::size_t j, const SpectralField& u) {
    if (params_.nonlinearity_enabled) {
      const SpectralField b = nonlinearity(u, params_.basis);
      for (std::size_t n = 0; n < n_modes_; ++n) at(n, j) = params_.nonlinearity_sign * b[n];
    } else {
      for (std::size_t n = 0; n < n_modes_; ++n) at(n, j) = 0.0;
    }
    if (!params_.noise.silent()) {
      const std::vector<double> dw = path_.step(j);
      const SpectralField g = noise_coefficient(u, params_.noise, dw, params_.basis);
      const double inv_dt = 1.0 / params_.dt;
      for (std::size_t n = 0; n < n_modes_; ++n) at(n, j) += g[n] * inv_dt;
    }
  }

  /// u(t_k) = P(k) u0 + sum_{j<k} w(k-j) F_j.
  SpectralField evolve(std::size_t k, const SpectralField& u0, const KernelTable& table) const {
    SpectralField u(n_modes_);
    for (std::size_t n = 0; n < n_modes_; ++n) {
      const auto w = table.mode_weights(n);
      const double* f = values_.data() + n * n_steps_;
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += w[k - j] * f[j];
      u[n] = table.propagator(n, k) * u0[n] + acc;
    }
    return u;
  }

 private:
  double& at(std::size_t n, std::size_t j) { return values_[n * n_steps_ + j]; }

  const ModelParams& params_;
  const NoisePath& path_;
  std::size_t n_modes_;
  std::size_t n_steps_;
  std::vector<double> values_;
};

void guard(const SpectralField& u, std::size_t k) {
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (!std::isfinite(u[n]) || std::abs(u[n]) > kBlowUpThreshold) {
      throw BlowUpError(k, "numerical blow-up at step " + std::to_string(k) + ": mode " +
                               std::to_string(n + 1) + " coefficient " + csv::format_number(u[n]));
    }
  }
}

Trajectory empty_trajectory(const ModelParams& params, const NoisePath& path) {
  Trajectory traj;
  traj.times.resize(params.n_steps + 1);
  for (std::size_t k = 0; k <= params.n_steps; ++k) traj.times[k] = static_cast<double>(k) * params.dt;
  traj.params_fingerprint = params.fingerprint();
  traj.master_seed = path.master_seed;
  traj.path_index = path.path_index;
  traj.fields.reserve(params.n_steps + 1);
  return traj;
}

double sup_difference(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.fields.size(); ++k) {
    worst = std::max(worst, l2_norm(a.fields[k] - b.fields[k]));
  }
  return worst;
}

}  // namespace

Trajectory step_scheme(const ModelParams& params, const SpectralField& u0, const NoisePath& path,
                       const KernelTable& table) {
  check_compatible(params, u0, path, table);
  Trajectory traj = empty_trajectory(params, path);
  Forcing forcing(params, path);
  traj.fields.push_back(u0);
  forcing.set(0, u0);
  for (std::size_t k = 1; k <= params.n_steps; ++k) {
    SpectralField u = forcing.evolve(k, u0, table);
    guard(u, k);
    if (k < params.n_steps) forcing.set(k, u);
    traj.fields.push_back(std::move(u));
  }
  return traj;
}

PicardResult picard_solve(const ModelParams& params, const SpectralField& u0,
                          const NoisePath& path, const KernelTable& table, std::size_t max_iter,
                          double tol) {
  if (max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be > 0");
  check_compatible(params, u0, path, table);

  PicardResult result;
  Trajectory first = empty_trajectory(params, path);
  first.fields.assign(params.n_steps + 1, u0);
  result.iterates.push_back(std::move(first));

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    const Trajectory& prev = result.iterates.back();
    Forcing forcing(params, path);
    for (std::size_t j = 0; j < params.n_steps; ++j) forcing.set(j, prev.fields[j]);
    Trajectory next = empty_trajectory(params, path);
    for (std::size_t k = 0; k <= params.n_steps; ++k) {
      SpectralField u = forcing.evolve(k, u0, table);
      guard(u, k);
      next.fields.push_back(std::move(u));
    }
    const double diff = sup_difference(next, prev);
    result.sup_differences.push_back(diff);
    result.iterates.push_back(std::move(next));
    if (diff < tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::size_t caputo_residual_first_step(std::size_t n_steps) {
  // t_k >= T/10
  return std::max<std::size_t>(1, n_steps / 10);
}

double caputo_residual(const Trajectory& traj, const ModelParams& params) {
  params.validate();
  if (!params.noise.silent()) {
    throw std::invalid_argument("caputo_residual: only defined for deterministic trajectories (sigma = 0)");
  }
  const std::size_t n_steps = traj.fields.size() - 1;
  if (traj.fields.empty() || n_steps < 1) throw std::invalid_argument("caputo_residual: empty trajectory");
  const std::size_t n_modes = params.basis.n_modes();
  const double beta = params.beta;

  // L1 weights b_j = (j+1)^{1-beta} - j^{1-beta}; b_0 = 1 also at beta = 1.
  std::vector<double> b(n_steps, 1.0);
  for (std::size_t j = 1; j < n_steps; ++j) {
    b[j] = std::pow(static_cast<double>(j + 1), 1.0 - beta) - std::pow(static_cast<double>(j), 1.0 - beta);
  }
  const double scale = std::pow(params.dt, -beta) / specfun::gamma_fn(2.0 - beta);

  double worst = 0.0;
  for (std::size_t k = caputo_residual_first_step(n_steps); k <= n_steps; ++k) {
    SpectralField caputo(n_modes);
    for (std::size_t j = 0; j < k; ++j) {
      const SpectralField& hi = traj.fields[k - j];
      const SpectralField& lo = traj.fields[k - j - 1];
      for (std::size_t n = 0; n < n_modes; ++n) caputo[n] += b[j] * (hi[n] - lo[n]);
    }
    caputo *= scale;
    const SpectralField au = apply_fractional_power(traj.fields[k], params.alpha, params.basis);
    SpectralField residual = caputo + au;
    if (params.nonlinearity_enabled) {
      residual -= params.nonlinearity_sign * nonlinearity(traj.fields[k], params.basis);
    }
    const double denom = l2_norm(au);
    const double num = l2_norm(residual);
    if (denom == 0.0) continue;  // 0/0 on a vanishing state
    worst = std::max(worst, num / denom);
  }
  return worst;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  csv::Writer w(out);
  w.header({"t", "mode", "coefficient"});
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    for (std::size_t n = 0; n < traj.fields[k].size(); ++n) w.row(traj.times[k], n + 1, traj.fields[k][n]);
  }
}

void write_trajectory_summary_csv(std::ostream& out, const Trajectory& traj,
                                  const ModelParams& params) {
  csv::Writer w(out);
  w.header({"t", "norm", "norm_nu"});
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    w.row(traj.times[k], l2_norm(traj.fields[k]), sobolev_norm(traj.fields[k], params.nu, params.basis));
  }
}

}  // namespace fsburgers
