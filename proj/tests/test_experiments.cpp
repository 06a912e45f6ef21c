#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fsburgers/experiments.hpp"
#include "oracles.hpp"

using namespace fsburgers;
using oracle::kPi;

namespace {

ModelParams params_for(std::size_t n_modes, std::size_t n_steps, double dt) {
  ModelParams p;
  p.basis = make_basis(n_modes, dealiased_grid_size(n_modes));
  p.n_steps = n_steps;
  p.dt = dt;
  return p;
}

SpectralField default_u0(std::size_t n_modes) {
  SpectralField u(n_modes);
  u[0] = 1.0;
  u[1] = 0.5;
  return u;
}

const ScanRow& find_row(const std::vector<ScanRow>& rows, double nu, const std::string& quantity) {
  for (const auto& r : rows) {
    if (r.nu == nu && r.quantity == quantity) return r;
  }
  throw std::runtime_error("row not found: " + quantity);
}

ScanConfig small_scan(std::size_t n_modes) {
  ScanConfig c = ScanConfig::with_default_grids();
  c.alphas = {1.5};
  c.betas = {0.5};
  c.nus = {0.0, 0.5, 1.0};
  c.n_modes = n_modes;
  c.n_fields = 5;
  return c;
}

}  // namespace

TEST(Moments, LinearDeterministicClosedForm) {
  ModelParams p = params_for(8, 400, 1e-3);
  p.noise.sigma = 0.0;
  p.nonlinearity_enabled = false;
  const std::vector<double> times{0.0, 0.1, 0.2, 0.4};
  for (int power : {2, 4}) {
    const auto report = moment_estimate(p, SpectralField::unit(8, 1), power, 0.0, times, 10, 42);
    ASSERT_EQ(report.estimates.size(), 4u);
    for (const auto& e : report.estimates) {
      const double want = std::pow(oracle::ml_half(-std::pow(kPi, 1.5) * std::sqrt(e.t)), power);
      EXPECT_NEAR(e.mean, want, 1e-10) << e.t;
      EXPECT_EQ(e.std_error, 0.0);
      EXPECT_EQ(e.p, power);
    }
    EXPECT_TRUE(report.blown_up_paths.empty());
  }
}

TEST(Moments, SobolevWeight) {
  ModelParams p = params_for(8, 100, 1e-3);
  p.noise.sigma = 0.0;
  p.nonlinearity_enabled = false;
  const auto report = moment_estimate(p, SpectralField::unit(8, 2), 2, 1.0, {0.0}, 2, 1);
  EXPECT_NEAR(report.estimates[0].mean, 4.0 * kPi * kPi, 1e-12);
}

TEST(Moments, Rejections) {
  const ModelParams p = params_for(8, 100, 1e-3);
  const auto u0 = default_u0(8);
  try {
    moment_estimate(p, u0, 2, 0.0, {0.05}, 1, 42);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("n_paths must be >= 2"), std::string::npos);
  }
  EXPECT_THROW(moment_estimate(p, u0, 3, 0.0, {0.05}, 10, 42), std::invalid_argument);
  EXPECT_THROW(moment_estimate(p, u0, 2, 0.0, {0.0505}, 10, 42), std::invalid_argument);
  EXPECT_THROW(moment_estimate(p, u0, 2, 0.0, {0.2}, 10, 42), std::invalid_argument);
}

TEST(Moments, ReproducibleAcrossRunsAndThreads) {
  const ModelParams p = params_for(16, 100, 1e-3);
  const std::vector<double> times{0.05, 0.1};
  const auto a = moment_estimate(p, default_u0(16), 2, 0.0, times, 24, 7, 1);
  const auto b = moment_estimate(p, default_u0(16), 2, 0.0, times, 24, 7, 1);
  const auto c = moment_estimate(p, default_u0(16), 2, 0.0, times, 24, 7, 4);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_EQ(a.estimates[i].mean, b.estimates[i].mean);
    EXPECT_EQ(a.estimates[i].mean, c.estimates[i].mean);
    EXPECT_EQ(a.estimates[i].std_error, c.estimates[i].std_error);
    EXPECT_GT(a.estimates[i].std_error, 0.0);
  }
  const auto d = moment_estimate(p, default_u0(16), 2, 0.0, times, 24, 8, 1);
  EXPECT_NE(a.estimates[1].mean, d.estimates[1].mean);
}

TEST(Moments, BoundedUnderDefaultNoise) {
  const ModelParams p = params_for(32, 500, 1e-3);
  const std::vector<double> times{0.0, 0.125, 0.25, 0.375, 0.5};
  const auto report = moment_estimate(p, default_u0(32), 2, 0.0, times, 100, 42);
  const double start = report.estimates[0].mean;
  EXPECT_NEAR(start, 1.25, 1e-14);
  for (const auto& e : report.estimates) {
    EXPECT_TRUE(std::isfinite(e.mean));
    EXPECT_LE(e.mean, 10.0 * start);
    EXPECT_EQ(e.n_paths, 100u);
  }
}

TEST(Moments, TooManyBlowUps) {
  ModelParams p = params_for(32, 50, 0.1);
  p.noise.sigma = 5.0;
  EXPECT_THROW(moment_estimate(p, default_u0(32), 2, 0.0, {5.0}, 10, 42), TooManyBlowUps);
}

TEST(HolderTheory, Values) {
  EXPECT_NEAR(holder_gamma_theory(2.0, 1.0, 0.5, 8), 0.125, 1e-15);
  EXPECT_LT(holder_gamma_theory(1.8, 0.9, 0.0, 2), 0.0);
  EXPECT_NEAR(holder_gamma_theory(1.5, 0.5, 0.0, 64), -1.0 / 64.0, 1e-15);
  const double a = 1.9, b = 0.95, nu = 0.3;
  const int pw = 32;
  const double want = std::min({b * nu / a, (pw * b * (a - nu - 1) - a) / (pw * a),
                                (2 * pw * b * (a - nu) - (pw + 2) * a) / (2 * pw * a)});
  EXPECT_NEAR(holder_gamma_theory(a, b, nu, pw), want, 1e-15);
}

TEST(HolderFitting, ExactPowerLaw) {
  const std::vector<double> lags{0.004, 0.008, 0.016, 0.032, 0.064};
  std::vector<double> moments;
  for (double h : lags) moments.push_back(3.0 * std::pow(h, 0.37));
  double slope = 0.0, ci = -1.0;
  fit_log_log(lags, moments, slope, ci);
  EXPECT_NEAR(slope, 0.37, 1e-12);
  EXPECT_NEAR(ci, 0.0, 1e-10);
}

TEST(HolderFitting, NoisyHalfWidthCoversStudentT) {
  const std::vector<double> lags{1, 2, 4, 8, 16};
  const std::vector<double> moments{1.0, 1.5, 1.9, 3.1, 3.9};
  double slope = 0.0, ci = 0.0;
  fit_log_log(lags, moments, slope, ci);
  EXPECT_NEAR(slope, oracle::log_log_slope(lags, moments), 1e-12);
  EXPECT_GT(ci, 0.0);
}

TEST(HolderExponent, DeterministicMomentsMatchPropagator) {
  ModelParams p = params_for(8, 400, 1e-3);
  p.noise.sigma = 0.0;
  p.nonlinearity_enabled = false;
  const std::vector<double> lags{0.004, 0.008, 0.016, 0.032, 0.064};
  const auto fit = holder_exponent(p, SpectralField::unit(8, 1), 2, 0.0, 0.2, lags, 10, 42);
  const auto table = make_kernel_table(p);
  ASSERT_EQ(fit.moments.size(), lags.size());
  for (std::size_t i = 0; i < lags.size(); ++i) {
    const std::size_t m = static_cast<std::size_t>(std::lround(lags[i] / p.dt));
    EXPECT_NEAR(fit.moments[i], std::abs(table.propagator(0, 200 + m) - table.propagator(0, 200)), 1e-10);
  }
  EXPECT_GT(fit.slope, 0.8);  // smooth away from t = 0
}

TEST(HolderExponent, AdditiveNoiseAgainstIsometry) {
  ModelParams p = params_for(8, 200, 1e-3);
  p.nonlinearity_enabled = false;
  p.noise.coupling = Coupling::additive;
  const std::vector<double> lags{0.004, 0.008, 0.016, 0.032};
  const auto fit = holder_exponent(p, SpectralField::unit(8, 1), 2, 0.0, 0.1, lags, 400, 3);
  const auto table = make_kernel_table(p);
  std::vector<double> q;
  for (std::size_t n = 1; n <= 8; ++n) q.push_back(p.noise.q(n));
  for (std::size_t i = 0; i < lags.size(); ++i) {
    const std::size_t m = static_cast<std::size_t>(std::lround(lags[i] / p.dt));
    const double want = std::sqrt(oracle::linear_additive_increment_moment(
        table, SpectralField::unit(8, 1), p.basis.eigenvalues(), 0.0, p.noise.sigma, q, 100, 100 + m));
    // 400 paths: the second moment has relative error about sqrt(2/400) per mode.
    EXPECT_NEAR(fit.moments[i], want, 0.15 * want) << lags[i];
  }
}

TEST(HolderExponent, Rejections) {
  const ModelParams p = params_for(8, 100, 1e-3);
  const auto u0 = default_u0(8);
  EXPECT_THROW(holder_exponent(p, u0, 2, 0.0, 0.05, {0.004, 0.008, 0.016}, 10, 1), std::invalid_argument);
  EXPECT_THROW(holder_exponent(p, u0, 2, 0.0, 0.05, {0.004, 0.008, 0.012, 0.016}, 10, 1), std::invalid_argument);
  EXPECT_THROW(holder_exponent(p, u0, 2, 0.0, 0.05, {0.004, 0.008, 0.016, 0.032, 0.064}, 10, 1),
               std::invalid_argument);
  ModelParams silent = p;
  silent.noise.sigma = 0.0;
  EXPECT_THROW(holder_exponent(silent, SpectralField(8), 2, 0.0, 0.02, {0.004, 0.008, 0.016, 0.032}, 10, 1),
               std::runtime_error);
}

TEST(HolderExponent, DefaultLags) {
  const ModelParams p = params_for(8, 500, 1e-3);
  const auto lags = default_lags(p, 0.25);
  ASSERT_GE(lags.size(), 4u);
  EXPECT_NEAR(lags[0], 0.004, 1e-15);
  for (std::size_t i = 1; i < lags.size(); ++i) EXPECT_NEAR(lags[i], 2.0 * lags[i - 1], 1e-15);
  EXPECT_LE(0.25 + lags.back(), 0.5 + 1e-12);
}

TEST(OperatorScan, ContractionAtNuZero) {
  const auto rows = operator_bound_scan(small_scan(16));
  EXPECT_EQ(rows.size(), 3u * 2u * 3u);
  EXPECT_LE(find_row(rows, 0.0, "E_beta.weighted_sup").value, 1.0 + 1e-9);
  EXPECT_LE(find_row(rows, 0.0, "E_beta_beta.weighted_sup").value, 1.0 / std::tgamma(0.5) + 1e-9);
  for (const auto& r : rows) {
    EXPECT_TRUE(std::isfinite(r.value)) << r.quantity;
    EXPECT_GE(r.value, 0.0);
  }
}

TEST(OperatorScan, StableInTruncation) {
  const auto coarse = operator_bound_scan(small_scan(16));
  const auto fine = operator_bound_scan(small_scan(64));
  ASSERT_EQ(coarse.size(), fine.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    ASSERT_EQ(coarse[i].quantity, fine[i].quantity);
    EXPECT_LE(fine[i].value, 2.0 * coarse[i].value) << coarse[i].quantity << " nu=" << coarse[i].nu;
    EXPECT_LE(coarse[i].value, 2.0 * fine[i].value) << coarse[i].quantity << " nu=" << coarse[i].nu;
  }
}

TEST(OperatorScan, DuplicatePairTimesAndInvalidGrids) {
  ScanConfig c = small_scan(8);
  c.pair_times = {0.5, 0.5, 1.0};
  for (const auto& r : operator_bound_scan(c)) EXPECT_TRUE(std::isfinite(r.value));
  ScanConfig bad = small_scan(8);
  bad.nus = {1.5};
  EXPECT_THROW(operator_bound_scan(bad), std::invalid_argument);
  bad = small_scan(8);
  bad.times = {0.0};
  EXPECT_THROW(operator_bound_scan(bad), std::invalid_argument);
  bad = small_scan(8);
  bad.pair_times.clear();
  EXPECT_THROW(operator_bound_scan(bad), std::invalid_argument);
  bad = small_scan(8);
  bad.alphas = {2.5};
  EXPECT_THROW(operator_bound_scan(bad), std::invalid_argument);
}

TEST(PicardStudyTest, ConvergesToDirectScheme) {
  const ModelParams p = params_for(16, 200, 1e-3);
  const auto study = picard_convergence_study(p, default_u0(16), 42, 40, 1e-8);
  EXPECT_TRUE(study.converged);
  EXPECT_LT(study.sup_differences.back(), 1e-8);
  EXPECT_LE(study.step_scheme_deviation, 1e-7);
}

TEST(ExperimentCsv, Headers) {
  auto header = [](const std::string& text) { return text.substr(0, text.find('\n')); };
  std::ostringstream m, h, s, pc;
  write_moments_csv(m, {MomentEstimate{0.1, 2, 0.0, 1.0, 0.1, 10}});
  HolderFit fit;
  fit.lags = {0.1};
  fit.moments = {0.2};
  fit.vacuous = true;
  write_holder_csv(h, fit);
  write_scan_csv(s, {ScanRow{1.5, 0.5, 0.0, "E_beta.weighted_sup", 1.0}});
  write_picard_csv(pc, PicardStudy{{1.0, 0.1}, true, 0.0});
  EXPECT_EQ(header(m.str()), "t,p,s,mean,stderr,n_paths");
  EXPECT_EQ(header(h.str()), "lag,moment,slope,ci,gamma_theory");
  EXPECT_NE(h.str().find("vacuous"), std::string::npos);
  EXPECT_EQ(header(s.str()), "alpha,beta,nu,quantity,value");
  EXPECT_EQ(header(pc.str()), "iteration,sup_difference,converged,step_scheme_deviation");
}
