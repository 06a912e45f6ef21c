#pragma once

// Independent reference values for the tests. Nothing here calls the
// evaluators under test unless noted (the discrete Itô isometry reads the
// scheme's own kernel table on purpose: it is an oracle for the scheme).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fsburgers/spectral.hpp"

namespace oracle {

constexpr double kPi = std::numbers::pi;

/// E_{1/2}(z) = exp(z^2) erfc(-z), z in [-25, 0].
inline double ml_half(double z) { return std::exp(z * z) * std::erfc(-z); }
/// E_{1/2,1/2}(z) = 1/sqrt(pi) + z E_{1/2}(z).
inline double ml_half_half(double z) { return 1.0 / std::sqrt(kPi) + z * ml_half(z); }
/// E_{1/2,3/2}(z) = (E_{1/2}(z) - 1)/z.
inline double ml_half_three_halves(double z) {
  return z == 0.0 ? 2.0 / std::sqrt(kPi) : (ml_half(z) - 1.0) / z;
}

/// M_{1/2}(theta) = exp(-theta^2/4)/sqrt(pi).
inline double mainardi_half(double theta) { return std::exp(-theta * theta / 4.0) / std::sqrt(kPi); }
/// Lévy density omega_{1/2}(y) = y^{-3/2} exp(-1/(4y)) / (2 sqrt(pi)).
inline double levy(double y) { return std::pow(y, -1.5) * std::exp(-0.25 / y) / (2.0 * std::sqrt(kPi)); }

/// Plain long double series of E_{beta,rho}(z); only for |z| <= 2 and
/// beta >= 0.3, where the largest term stays below about 1e5.
inline double ml_series(double beta, double rho, double z) {
  long double sum = 0.0L, zk = 1.0L;
  for (int k = 0; k < 400; ++k) {
    const long double term = zk / std::tgamma(static_cast<long double>(beta) * k + rho);
    sum += term;
    if (k > 10 && std::fabs(term) < 1e-22L) break;
    zk *= z;
  }
  return static_cast<double>(sum);
}

/// Frozen high-precision Mittag-Leffler values (200-digit series, see
/// tests/oracle_scripts/ml_reference.py).
struct MLReference {
  double beta, rho, z, value;
};
inline const std::vector<MLReference>& ml_references() {
  static const std::vector<MLReference> table = {
      {0.5, 1.0, -1.0, 0.42758357615580700441},   {0.3, 1.0, -0.5, 0.63264900594359902246},
      {0.3, 1.0, -5.0, 0.13708086902027063889},   {0.8, 1.0, -2.0, 0.18979669236370564843},
      {0.8, 1.0, -20.0, 0.011617250451432777958}, {0.8, 1.0, -50.0, 0.0044677761579029922645},
      {0.9, 1.0, -10.0, 0.012820606051102099938}, {0.5, 0.5, -3.0, 0.02718613000358643569},
      {0.8, 0.8, -7.0, 0.0052342779709382291535}, {0.5, 1.5, -4.0, 0.21575013559373465253},
      {0.8, 1.8, -12.0, 0.081644319565254263823}, {0.3, 1.3, -2.0, 0.35488388691606233071},
      {0.95, 1.0, -3.0, 0.06753202221407190526},
  };
  return table;
}
struct MainardiReference {
  double beta, theta, value;
};
inline const std::vector<MainardiReference>& mainardi_references() {
  static const std::vector<MainardiReference> table = {
      {0.3, 0.5, 0.56100164873166428441}, {0.3, 2.0, 0.16840030622678312291},
      {0.8, 1.5, 0.65542835417510525922}, {0.8, 3.0, 7.5197185445412367887e-9},
      {0.7, 0.25, 0.40364009291524533495},
  };
  return table;
}

/// <u u_x, e_n> on (0,1) by composite Gauss-Legendre quadrature of the
/// analytic field u(x) = sum_k c_k sqrt(2) sin(k pi x).
inline std::vector<double> projected_nonlinearity(const std::vector<double>& c, std::size_t n_out) {
  auto u = [&](double x, double& value, double& slope) {
    value = slope = 0.0;
    for (std::size_t k = 1; k <= c.size(); ++k) {
      value += c[k - 1] * std::sqrt(2.0) * std::sin(k * kPi * x);
      slope += c[k - 1] * std::sqrt(2.0) * k * kPi * std::cos(k * kPi * x);
    }
  };
  std::vector<double> out(n_out, 0.0);
  constexpr int panels = 64;
  for (std::size_t n = 1; n <= n_out; ++n) {
    auto f = [&](double x) {
      double v, s;
      u(x, v, s);
      return v * s * std::sqrt(2.0) * std::sin(n * kPi * x);
    };
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
      total += boost::math::quadrature::gauss<double, 30>::integrate(f, double(i) / panels, double(i + 1) / panels);
    }
    out[n - 1] = total;
  }
  return out;
}

/// int_a^b tau^{-1/2} E_{1/2,1/2}(-mu tau^{1/2}) dtau with the closed-form kernel.
inline double half_kernel_weight(double mu, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(
      [mu](double tau) { return std::pow(tau, -0.5) * ml_half_half(-mu * std::sqrt(tau)); }, a, b);
}

/// Classical exponential-integrator weight (1 - e^{-lambda dt}) / lambda,
/// shifted: int_{(k-1)dt}^{k dt} e^{-lambda tau} dtau.
inline double exponential_weight(double lambda, double dt, std::size_t k) {
  return std::exp(-lambda * (k - 1.0) * dt) * (-std::expm1(-lambda * dt)) / lambda;
}

/// Philox4x32-10 known-answer vectors (Random123 kat_vectors).
struct PhiloxKat {
  std::uint32_t ctr[4];
  std::uint32_t key[2];
  std::uint32_t out[4];
};
inline const PhiloxKat kPhiloxKats[] = {
    {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}},
    {{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
     {0xffffffff, 0xffffffff},
     {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}},
    {{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
     {0xa4093822, 0x299f31d0},
     {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}},
};

/// Second moment of the scheme's increment u(t_{k0+m}) - u(t_{k0}) in H^s for
/// the linear scheme with additive noise (no nonlinearity): deterministic
/// part plus the discrete Itô isometry
///   sum_j [ (w(k1-j) 1{j<k1} - w(k0-j) 1{j<k0}) sigma/dt ]^2 q_n dt.
inline double linear_additive_increment_moment(const fsburgers::KernelTable& table,
                                               const fsburgers::SpectralField& u0,
                                               std::span<const double> lambda, double s,
                                               double sigma, const std::vector<double>& q,
                                               std::size_t k0, std::size_t k1) {
  const double dt = table.dt;
  double total = 0.0;
  for (std::size_t n = 0; n < table.n_modes(); ++n) {
    const double d = (table.propagator(n, k1) - table.propagator(n, k0)) * u0[n];
    double var = 0.0;
    for (std::size_t j = 0; j < k1; ++j) {
      double c = table.weight(n, k1 - j) - (j < k0 ? table.weight(n, k0 - j) : 0.0);
      c *= sigma / dt;
      var += c * c;
    }
    total += std::pow(lambda[n], s) * (d * d + q[n] * dt * var);
  }
  return total;
}

/// Least-squares slope of log y against log x.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace oracle
