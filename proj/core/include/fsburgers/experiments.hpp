#pragma once

// Monte Carlo estimators and scans: moment bounds, temporal Hölder
// exponents, Mittag-Leffler operator bounds, Picard convergence.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fsburgers/solver.hpp"

namespace fsburgers {

struct MomentEstimate {
  double t = 0.0;
  int p = 2;
  double s = 0.0;
  double mean = 0.0;       // sample mean of ||u(t)||_{H^s}^p
  double std_error = 0.0;  // sample standard deviation / sqrt(n_paths)
  std::size_t n_paths = 0;  // paths that contributed
};

struct MomentReport {
  std::vector<MomentEstimate> estimates;
  /// Indices of paths excluded after a blow-up.
  std::vector<std::uint64_t> blown_up_paths;
};

/// Thrown when more than 1% of the Monte Carlo paths blow up.
class TooManyBlowUps : public BlowUpError {
 public:
  TooManyBlowUps(std::size_t first_step, std::size_t count, std::size_t n_paths);
};

/// Requested times must lie on the time grid (t = k dt, 0 <= k <= K).
/// Silent noise bypasses Monte Carlo: one deterministic run, std_error 0.
/// n_threads = 0 uses the hardware concurrency; results do not depend on it.
MomentReport moment_estimate(const ModelParams& params, const SpectralField& u0, int p, double s,
                             const std::vector<double>& times, std::size_t n_paths,
                             std::uint64_t seed, unsigned n_threads = 0);

struct HolderFit {
  std::vector<double> lags;
  /// E[||u(t*+h) - u(t*)||_{H^s}^p]^{1/p} per lag.
  std::vector<double> moments;
  double slope = 0.0;
  /// 95% half-width of the slope from the fit residuals (Student t, n-2 dof).
  double ci_half_width = 0.0;
  /// Theory exponent for lags < 1, clamped at 0.
  double gamma_theory = 0.0;
  /// The unclamped theory exponent is negative.
  bool vacuous = false;
};

/// gamma = min{beta nu/alpha, [p beta(alpha-nu-1) - alpha]/(p alpha),
///             [2p beta(alpha-nu) - (p+2) alpha]/(2p alpha)}, unclamped.
double holder_gamma_theory(double alpha, double beta, double nu, int p);

/// Least-squares slope of log(moments) against log(lags) with its 95% half-width.
void fit_log_log(const std::vector<double>& lags, const std::vector<double>& moments,
                 double& slope, double& ci_half_width);

/// Lags must be >= 4, dyadic (each twice the previous), on the time grid, and
/// base_time + max lag <= T. The theory exponent is evaluated at nu = s.
HolderFit holder_exponent(const ModelParams& params, const SpectralField& u0, int p, double s,
                          double base_time, const std::vector<double>& lags, std::size_t n_paths,
                          std::uint64_t seed, unsigned n_threads = 0);

/// Dyadic lags 4dt, 8dt, ... that fit after base_time.
std::vector<double> default_lags(const ModelParams& params, double base_time);

struct ScanConfig {
  std::vector<double> alphas{1.2, 1.5, 1.8};
  std::vector<double> betas{0.5, 0.8};
  std::vector<double> nus{0.0, 0.5, 1.0};
  /// Times for the weighted supremum, within (0,1].
  std::vector<double> times;
  /// Grid on [0.1, 1] whose ordered pairs feed the difference quotients.
  std::vector<double> pair_times;
  std::size_t n_fields = 20;
  std::uint64_t seed = 42;
  std::size_t n_modes = 32;

  /// times = 2^{-j}, j = 0..10; pair_times = 0.1, 0.2, ..., 1.
  static ScanConfig with_default_grids();
};

struct ScanRow {
  double alpha = 0.0;
  double beta = 0.0;
  double nu = 0.0;
  std::string quantity;
  double value = 0.0;
};

/// Per (alpha, beta, nu) and operator E in {E_beta, E_beta_beta}, over test
/// fields v (e_1..e_N plus n_fields random fields), the suprema of
///   <op>.weighted_sup       t^{beta nu/alpha} ||E(t) v||_{H^nu} / ||v||
///   <op>.holder_quotient    (t2-t1)^{-beta nu/alpha} ||(E(t2)-E(t1)) v||_{H^nu} / ||v||
///   <op>.lipschitz_quotient ||(E(t2)-E(t1)) v||_{H^nu} / ((t2-t1) ||v||)
/// with pairs t1 < t2 from pair_times (equal times skipped).
std::vector<ScanRow> operator_bound_scan(const ScanConfig& config);

struct PicardStudy {
  std::vector<double> sup_differences;
  bool converged = false;
  /// sup_k ||u_final(t_k) - u_step(t_k)|| against step_scheme on the same path.
  double step_scheme_deviation = 0.0;
};

PicardStudy picard_convergence_study(const ModelParams& params, const SpectralField& u0,
                                     std::uint64_t seed, std::size_t max_iter, double tol);

/// CSV t,p,s,mean,stderr,n_paths
void write_moments_csv(std::ostream& out, const std::vector<MomentEstimate>& estimates);
/// CSV lag,moment,slope,ci,gamma_theory (slope, ci and gamma repeated per row;
/// gamma_theory is "vacuous" when the theory exponent is negative).
void write_holder_csv(std::ostream& out, const HolderFit& fit);
/// CSV alpha,beta,nu,quantity,value
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);
/// CSV iteration,sup_difference,converged,step_scheme_deviation
void write_picard_csv(std::ostream& out, const PicardStudy& study);

}  // namespace fsburgers
