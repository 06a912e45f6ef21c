#pragma once

// Right-hand-side ingredients of the equation: the Burgers nonlinearity
// B(u) = u u_x, the noise coefficient g(u) and Q-Wiener increments.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsburgers/spectral.hpp"

namespace fsburgers {

enum class Coupling { diagonal, pointwise, additive };

/// Throws std::invalid_argument for an unknown label.
Coupling parse_coupling(std::string_view label);
std::string_view to_string(Coupling c);

/// Q has eigenvalues q_n = q_scale * n^{-q_decay} on the sine basis.
struct NoiseSpec {
  double q_decay = 2.0;
  double q_scale = 1.0;
  Coupling coupling = Coupling::diagonal;
  double sigma = 0.5;

  void validate() const;
  double q(std::size_t mode) const;
  /// True when every increment is multiplied by zero.
  bool silent() const { return sigma == 0.0 || q_scale == 0.0; }
};

/// Per-mode Brownian increments dW_n(k) over [t_k, t_{k+1}], variance q_n dt.
struct NoisePath {
  std::size_t n_modes = 0;
  std::size_t n_steps = 0;
  double dt = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
  std::vector<double> increments;  // row-major [mode][step]

  double increment(std::size_t n, std::size_t k) const { return increments[n * n_steps + k]; }
  /// Increments of all modes at step k.
  std::vector<double> step(std::size_t k) const;

  static NoisePath zeros(std::size_t n_modes, std::size_t n_steps, double dt);
};

/// Deterministic in (master_seed, path_index); each Gaussian is keyed by
/// (master_seed; path_index, mode, step).
NoisePath sample_path(const NoiseSpec& spec, const SpectralBasis& basis, double dt,
                      std::size_t n_steps, std::uint64_t master_seed, std::uint64_t path_index);

/// Binary dump: five little-endian 8-byte header fields
/// (N: u64, K: u64, dt: f64, seed: u64, index: u64) followed by N*K f64
/// increments in row-major [mode][step] order.
void write_noise_path(std::ostream& out, const NoisePath& path);
NoisePath read_noise_path(std::istream& in);

/// Galerkin projection of u u_x, computed by collocation on the basis grid.
/// Exact (no aliasing) because the grid satisfies M >= 3N/2.
SpectralField nonlinearity(const SpectralField& u, const SpectralBasis& basis);

/// g(u) applied to one step of increments dW (length N):
///   diagonal:  sigma u_n dW_n
///   pointwise: sigma P_N[u(x) * sum_n dW_n e_n(x)]   (grid product)
///   additive:  sigma dW_n
SpectralField noise_coefficient(const SpectralField& u, const NoiseSpec& spec,
                                std::span<const double> dw, const SpectralBasis& basis);

/// Hilbert-Schmidt norm ||g(u) Q^{1/2}||_HS of the diagonal or additive
/// coupling operator. Pointwise coupling is rejected (no closed form).
double noise_operator_norm(const SpectralField& u, const NoiseSpec& spec);

struct AssumptionBReport {
  std::size_t n_modes = 0;
  std::size_t n_samples = 0;
  double s = -1.0;
  /// max ||B(u)||_{H^s} / ||u||^2
  double max_growth_ratio = 0.0;
  /// max ||B(u) - B(v)||_{H^s} / ((||u|| + ||v||) ||u - v||)
  double max_lipschitz_ratio = 0.0;
  std::size_t skipped = 0;
};

/// Samples random fields with ||u||, ||v|| <= 1 and records the largest
/// ratios of the bilinear bounds. Zero fields are skipped.
AssumptionBReport check_assumption_B(const SpectralBasis& basis, std::size_t n_samples, double s,
                                     std::uint64_t seed = 42);

/// Random field with i.i.d. standard normal coefficients (stream `tag`).
SpectralField random_field(std::size_t n_modes, std::uint64_t seed, std::uint32_t index,
                           std::uint32_t tag = 0);

}  // namespace fsburgers
