#pragma once

// Dirichlet sine eigenbasis on D = (0,1): e_n(x) = sqrt(2) sin(n pi x),
// lambda_n = pi^2 n^2. Fields are stored as their first N coefficients
// v_n = <v, e_n>; the physical grid x_j = j/(M+1), j = 1..M, is used only for
// products (nonlinearity, multiplicative noise).

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace fsburgers {

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(std::size_t n_modes) : coeffs_(n_modes, 0.0) {}
  explicit SpectralField(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  /// Unit vector e_mode (mode is 1-based).
  static SpectralField unit(std::size_t n_modes, std::size_t mode);

  std::size_t size() const { return coeffs_.size(); }
  /// Coefficient of mode i + 1.
  double& operator[](std::size_t i) { return coeffs_[i]; }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  std::span<double> coeffs() { return coeffs_; }
  std::span<const double> coeffs() const { return coeffs_; }

  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  friend bool operator==(const SpectralField&, const SpectralField&) = default;

 private:
  std::vector<double> coeffs_;
};

/// L2 inner product and norm (Parseval in the orthonormal basis).
double inner(const SpectralField& a, const SpectralField& b);
double l2_norm(const SpectralField& v);

class SpectralBasis {
 public:
  SpectralBasis(std::size_t n_modes, std::size_t grid_size);

  std::size_t n_modes() const { return n_modes_; }
  std::size_t grid_size() const { return grid_size_; }
  /// lambda_n = pi^2 n^2 for n = 1..N (index n - 1).
  std::span<const double> eigenvalues() const { return eigenvalues_; }
  double eigenvalue(std::size_t mode) const { return eigenvalues_[mode - 1]; }
  /// x_j = j / (M + 1), j = 1..M (index j - 1).
  std::span<const double> grid() const { return grid_; }

  /// e_n(x_j), row-major [j][n].
  double sine(std::size_t j, std::size_t n) const { return sine_[j * n_modes_ + n]; }
  /// e_n'(x_j) = sqrt(2) n pi cos(n pi x_j), row-major [j][n].
  double dsine(std::size_t j, std::size_t n) const { return dsine_[j * n_modes_ + n]; }

 private:
  std::size_t n_modes_;
  std::size_t grid_size_;
  std::vector<double> eigenvalues_;
  std::vector<double> grid_;
  std::vector<double> sine_;
  std::vector<double> dsine_;
};

/// Requires N >= 1 and M >= 3N/2 (no aliasing of quadratic products).
SpectralBasis make_basis(std::size_t n_modes, std::size_t grid_size);

/// Smallest grid size satisfying the 3/2 rule.
std::size_t dealiased_grid_size(std::size_t n_modes);

std::vector<double> to_grid(const SpectralField& field, const SpectralBasis& basis);
/// Discrete sine transform v_n = (1/(M+1)) sum_j u_j e_n(x_j); inverse of
/// to_grid on the first N modes.
SpectralField to_coeffs(std::span<const double> grid_values, const SpectralBasis& basis);

/// ||v||_{H^s} = (sum_n lambda_n^s v_n^2)^{1/2} = ||A^{s/2} v||.
double sobolev_norm(const SpectralField& field, double s, const SpectralBasis& basis);

/// v_n -> lambda_n^{s/2} v_n.
SpectralField apply_fractional_power(const SpectralField& field, double s,
                                     const SpectralBasis& basis);

enum class MLKind { E_beta, E_beta_beta };

/// Mittag-Leffler operator acting mode-wise: v_n -> E_beta(-mu_n t^beta) v_n
/// (or E_{beta,beta}), mu_n = lambda_n^{alpha/2}. Requires alpha in (1,2],
/// beta in (0,1], t >= 0.
SpectralField ml_operator_apply(MLKind kind, double t, double alpha, double beta,
                                const SpectralField& field, const SpectralBasis& basis);

/// Per-mode propagators and convolution weights on a uniform time grid.
///   propagator(n, k) = E_beta(-mu_n (k dt)^beta),                 k = 0..K
///   weight(n, k)     = int_{(k-1)dt}^{k dt} tau^{beta-1}
///                        E_{beta,beta}(-mu_n tau^beta) dtau,      k = 1..K
/// with mode index n = 0..N-1. weight(n, 0) is stored as 0.
struct KernelTable {
  double alpha = 0.0;
  double beta = 0.0;
  double dt = 0.0;
  std::size_t n_steps = 0;
  std::vector<double> rates;  // mu_n

  std::size_t n_modes() const { return rates.size(); }
  double propagator(std::size_t n, std::size_t k) const { return propagators[n * (n_steps + 1) + k]; }
  double weight(std::size_t n, std::size_t k) const { return weights[n * (n_steps + 1) + k]; }
  std::span<const double> mode_propagators(std::size_t n) const {
    return std::span<const double>(propagators).subspan(n * (n_steps + 1), n_steps + 1);
  }
  std::span<const double> mode_weights(std::size_t n) const {
    return std::span<const double>(weights).subspan(n * (n_steps + 1), n_steps + 1);
  }

  std::vector<double> propagators;
  std::vector<double> weights;
};

/// Weights use the exact antiderivative
///   d/dtau [tau^beta E_{beta,beta+1}(-mu tau^beta)] = tau^{beta-1} E_{beta,beta}(-mu tau^beta).
KernelTable build_kernel_table(double alpha, double beta, double dt, std::size_t n_steps,
                               const SpectralBasis& basis);

/// Same, from explicit eigenvalues (lambda_n >= 0); lets tests probe mu = 0.
KernelTable build_kernel_table(double alpha, double beta, double dt, std::size_t n_steps,
                               std::span<const double> eigenvalues);

/// CSV columns mode,k,propagator,weight (mode is 1-based).
void write_kernel_table_csv(std::ostream& out, const KernelTable& table);

/// Checks alpha in (1,2] and beta in (0,1]; throws std::invalid_argument.
void validate_fractional_orders(double alpha, double beta);

}  // namespace fsburgers
