#include "fsburgers/spectral.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fsburgers/csv.hpp"
#include "fsburgers/specfun.hpp"

namespace fsburgers {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_size(const SpectralField& a, std::size_t n, const char* what) {
  if (a.size() != n) {
    throw std::invalid_argument(std::string(what) + ": field has " + std::to_string(a.size()) +
                                " modes, expected " + std::to_string(n));
  }
}

}  // namespace

SpectralField SpectralField::unit(std::size_t n_modes, std::size_t mode) {
  if (mode < 1 || mode > n_modes) throw std::invalid_argument("SpectralField::unit: mode out of range");
  SpectralField f(n_modes);
  f[mode - 1] = 1.0;
  return f;
}

bool SpectralField::all_finite() const {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_size(o, size(), "SpectralField::operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_size(o, size(), "SpectralField::operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

double inner(const SpectralField& a, const SpectralField& b) {
  require_same_size(b, a.size(), "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(const SpectralField& v) { return std::sqrt(inner(v, v)); }

// ---------------------------------------------------------------------------

SpectralBasis::SpectralBasis(std::size_t n_modes, std::size_t grid_size)
    : n_modes_(n_modes), grid_size_(grid_size) {
  if (n_modes < 1) throw std::invalid_argument("make_basis: n_modes must be >= 1");
  if (2 * grid_size < 3 * n_modes) {
    throw std::invalid_argument("make_basis: grid_size must be >= 3N/2 (got M=" +
                                std::to_string(grid_size) + ", N=" + std::to_string(n_modes) + ")");
  }
  eigenvalues_.resize(n_modes);
  for (std::size_t n = 1; n <= n_modes; ++n) {
    const double k = kPi * static_cast<double>(n);
    eigenvalues_[n - 1] = k * k;
  }
  grid_.resize(grid_size);
  sine_.resize(grid_size * n_modes);
  dsine_.resize(grid_size * n_modes);
  const double h = 1.0 / static_cast<double>(grid_size + 1);
  const double root2 = std::sqrt(2.0);
  for (std::size_t j = 1; j <= grid_size; ++j) {
    grid_[j - 1] = static_cast<double>(j) * h;
    for (std::size_t n = 1; n <= n_modes; ++n) {
      // Reduce the integer product first so the phase is exact.
      const std::size_t phase = (j * n) % (2 * (grid_size + 1));
      const double angle = kPi * static_cast<double>(phase) * h;
      sine_[(j - 1) * n_modes + (n - 1)] = root2 * std::sin(angle);
      dsine_[(j - 1) * n_modes + (n - 1)] = root2 * kPi * static_cast<double>(n) * std::cos(angle);
    }
  }
}

SpectralBasis make_basis(std::size_t n_modes, std::size_t grid_size) {
  return SpectralBasis(n_modes, grid_size);
}

std::size_t dealiased_grid_size(std::size_t n_modes) { return (3 * n_modes + 1) / 2; }

std::vector<double> to_grid(const SpectralField& field, const SpectralBasis& basis) {
  require_same_size(field, basis.n_modes(), "to_grid");
  const std::size_t n_modes = basis.n_modes();
  std::vector<double> out(basis.grid_size(), 0.0);
  for (std::size_t j = 0; j < basis.grid_size(); ++j) {
    double s = 0.0;
    for (std::size_t n = 0; n < n_modes; ++n) s += field[n] * basis.sine(j, n);
    out[j] = s;
  }
  return out;
}

SpectralField to_coeffs(std::span<const double> grid_values, const SpectralBasis& basis) {
  if (grid_values.size() != basis.grid_size()) {
    throw std::invalid_argument("to_coeffs: expected " + std::to_string(basis.grid_size()) +
                                " grid values, got " + std::to_string(grid_values.size()));
  }
  const std::size_t n_modes = basis.n_modes();
  SpectralField out(n_modes);
  for (std::size_t j = 0; j < basis.grid_size(); ++j) {
    const double u = grid_values[j];
    for (std::size_t n = 0; n < n_modes; ++n) out[n] += u * basis.sine(j, n);
  }
  out *= 1.0 / static_cast<double>(basis.grid_size() + 1);
  return out;
}

double sobolev_norm(const SpectralField& field, double s, const SpectralBasis& basis) {
  require_same_size(field, basis.n_modes(), "sobolev_norm");
  double sum = 0.0;
  for (std::size_t n = 0; n < field.size(); ++n) {
    sum += std::pow(basis.eigenvalues()[n], s) * field[n] * field[n];
  }
  return std::sqrt(sum);
}

SpectralField apply_fractional_power(const SpectralField& field, double s,
                                     const SpectralBasis& basis) {
  require_same_size(field, basis.n_modes(), "apply_fractional_power");
  SpectralField out = field;
  for (std::size_t n = 0; n < out.size(); ++n) out[n] *= std::pow(basis.eigenvalues()[n], 0.5 * s);
  return out;
}

void validate_fractional_orders(double alpha, double beta) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::invalid_argument("alpha must be in (1,2] (got " + csv::format_number(alpha) + ")");
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("beta must be in (0,1] (got " + csv::format_number(beta) + ")");
  }
}

SpectralField ml_operator_apply(MLKind kind, double t, double alpha, double beta,
                                const SpectralField& field, const SpectralBasis& basis) {
  validate_fractional_orders(alpha, beta);
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("ml_operator_apply: t must be >= 0");
  require_same_size(field, basis.n_modes(), "ml_operator_apply");
  const double rho = kind == MLKind::E_beta ? 1.0 : beta;
  const double tb = std::pow(t, beta);
  SpectralField out = field;
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double mu = std::pow(basis.eigenvalues()[n], 0.5 * alpha);
    out[n] *= specfun::mittag_leffler2(beta, rho, -mu * tb);
  }
  return out;
}

KernelTable build_kernel_table(double alpha, double beta, double dt, std::size_t n_steps,
                               const SpectralBasis& basis) {
  return build_kernel_table(alpha, beta, dt, n_steps, basis.eigenvalues());
}

KernelTable build_kernel_table(double alpha, double beta, double dt, std::size_t n_steps,
                               std::span<const double> eigenvalues) {
  validate_fractional_orders(alpha, beta);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("build_kernel_table: dt must be > 0");
  if (n_steps < 1) throw std::invalid_argument("build_kernel_table: n_steps must be >= 1");

  KernelTable table;
  table.alpha = alpha;
  table.beta = beta;
  table.dt = dt;
  table.n_steps = n_steps;
  table.rates.resize(eigenvalues.size());
  const std::size_t stride = n_steps + 1;
  table.propagators.assign(eigenvalues.size() * stride, 0.0);
  table.weights.assign(eigenvalues.size() * stride, 0.0);

  std::vector<double> tb(stride);
  for (std::size_t k = 0; k <= n_steps; ++k) tb[k] = std::pow(static_cast<double>(k) * dt, beta);

  for (std::size_t n = 0; n < eigenvalues.size(); ++n) {
    if (!(eigenvalues[n] >= 0.0)) throw std::invalid_argument("build_kernel_table: eigenvalues must be >= 0");
    const double mu = std::pow(eigenvalues[n], 0.5 * alpha);
    table.rates[n] = mu;
    double prev_antiderivative = 0.0;
    for (std::size_t k = 0; k <= n_steps; ++k) {
      const double z = -mu * tb[k];
      const double e = specfun::mittag_leffler(beta, z);
      table.propagators[n * stride + k] = e;
      if (k == 0) continue;
      const double antiderivative = tb[k] * specfun::mittag_leffler2(beta, beta + 1.0, z);
      // The antiderivative equals (1 - E_beta(z))/mu. Once E_beta has decayed,
      // differencing the propagators cancels far less than differencing values
      // close to 1/mu.
      const double e_prev = table.propagators[n * stride + k - 1];
      table.weights[n * stride + k] =
          mu > 0.0 && e_prev < 1.0 - e ? (e_prev - e) / mu : antiderivative - prev_antiderivative;
      prev_antiderivative = antiderivative;
    }
  }
  return table;
}

void write_kernel_table_csv(std::ostream& out, const KernelTable& table) {
  csv::Writer w(out);
  w.header({"mode", "k", "propagator", "weight"});
  for (std::size_t n = 0; n < table.n_modes(); ++n) {
    for (std::size_t k = 0; k <= table.n_steps; ++k) {
      w.row(n + 1, k, table.propagator(n, k), table.weight(n, k));
    }
  }
}

}  // namespace fsburgers
