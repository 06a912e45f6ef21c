#pragma once

// Special functions behind the Mittag-Leffler operators: gamma, one- and
// two-parameter Mittag-Leffler functions on the negative real axis, the
// Mainardi (Wright-type) function M_beta and the one-sided stable density
// omega_beta. Every evaluator is pure and thread-safe.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fsburgers::specfun {

/// Parameters (beta, rho) of E_{beta,rho}. Requires 0 < beta <= 1, rho > 0.
struct MLParams {
  double beta = 1.0;
  double rho = 1.0;

  void validate() const;
};

/// Gamma function for x > 0 (Lanczos, fixed coefficients).
double gamma_fn(double x);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// 1/Gamma(x) for any real x; zero at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);

/// E_beta(z) = sum_k z^k / Gamma(beta k + 1), for 0 < beta <= 1 and z <= 0.
double mittag_leffler(double beta, double z);

/// E_{beta,rho}(z) = sum_k z^k / Gamma(beta k + rho), for z <= 0.
double mittag_leffler2(double beta, double rho, double z);
double mittag_leffler2(const MLParams& params, double z);

/// Mainardi function M_beta(theta) for 0 < beta < 1, theta >= 0.
double mainardi(double beta, double theta);

/// One-sided stable density omega_beta(theta), Laplace transform exp(-s^beta).
double stable_density(double beta, double theta);

/// Burkholder-Davis-Gundy constant
/// C(p) = [p(p-1)/2]^{p/2} (p/(p-1))^{p(p/2-1)} for p >= 2.
double bdg_constant(double p);

struct SpecfunReport {
  std::string identity;
  double beta = 0.0;
  double max_abs_error = 0.0;
  std::vector<double> sample_points;
  double tolerance = 0.0;
  bool pass = false;
};

/// Checks the defining identities of M_beta, omega_beta and E_beta by
/// adaptive quadrature (independent of the series evaluators). One report per
/// (identity, beta). Throws std::invalid_argument for beta outside (0,1) or a
/// non-positive tolerance; numerical mismatches are reported, not thrown.
///
/// Identities: "moment" (int theta^eps M = Gamma(1+eps)/Gamma(1+beta eps)),
/// "laplace_mittag_leffler" (int M e^{-z theta} = E_beta(-z)),
/// "laplace_stable" (int e^{-s theta} omega = e^{-s^beta}),
/// "m_omega_relation" (series of omega vs M through the change of variables),
/// and, at beta = 1/2 only, "mainardi_gaussian" (M_{1/2} closed form).
std::vector<SpecfunReport> verify_identities(std::span<const double> betas,
                                             double tolerance);

/// CSV with header identity,beta,param,max_abs_err,tolerance,pass. The param
/// column lists the report's sample points separated by ';'.
void write_reports_csv(std::ostream& out, std::span<const SpecfunReport> reports);

}  // namespace fsburgers::specfun
