#pragma once

// Discretized mild solution
//   u(t) = E_beta(t) u0 + int_0^t (t-s)^{beta-1} E_{beta,beta}(t-s) B(u(s)) ds
//                       + int_0^t (t-s)^{beta-1} E_{beta,beta}(t-s) g(u(s)) dW(s)
// with B(u(s)) and g(u(s)) frozen at the left end of every step and the
// kernel integrated exactly per mode (KernelTable weights). The stochastic
// term on [t_j, t_{j+1}] uses the averaged kernel weight/dt times dW(j).

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsburgers/dynamics.hpp"
#include "fsburgers/spectral.hpp"

namespace fsburgers {

struct ModelParams {
  double alpha = 1.5;
  double beta = 0.5;
  double nu = 0.0;
  SpectralBasis basis = make_basis(32, 48);
  NoiseSpec noise{};
  double dt = 1e-3;
  std::size_t n_steps = 500;
  bool nonlinearity_enabled = true;
  /// +1 follows the abstract form D^beta u = -A u + B(u) + g dW; -1 flips it.
  double nonlinearity_sign = 1.0;

  double final_time() const { return dt * static_cast<double>(n_steps); }
  /// alpha = 2 or beta = 1: outside the open parameter ranges of the theory,
  /// admitted for classical-limit checks.
  bool reduction_mode() const { return alpha == 2.0 || beta == 1.0; }
  void validate() const;
  /// Stable textual summary of every parameter, for provenance records.
  std::string fingerprint() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> fields;  // u(t_k), k = 0..K
  std::string params_fingerprint;
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

/// Thrown when a coefficient leaves [-1e8, 1e8] or becomes non-finite.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::size_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

inline constexpr double kBlowUpThreshold = 1e8;

/// Builds the table matching params (alpha, beta, dt, K, basis).
KernelTable make_kernel_table(const ModelParams& params);

Trajectory step_scheme(const ModelParams& params, const SpectralField& u0, const NoisePath& path,
                       const KernelTable& table);

struct PicardResult {
  /// iterates[0] is the constant trajectory u0.
  std::vector<Trajectory> iterates;
  /// sup_k ||u_{n+1}(t_k) - u_n(t_k)|| for n = 0, 1, ...
  std::vector<double> sup_differences;
  bool converged = false;
};

/// Picard iteration of the discretized fixed-point map on one noise path.
/// Stops when sup_k ||u_{n+1}(t_k) - u_n(t_k)|| < tol; non-convergence within
/// max_iter is reported, not thrown.
PicardResult picard_solve(const ModelParams& params, const SpectralField& u0,
                          const NoisePath& path, const KernelTable& table, std::size_t max_iter,
                          double tol);

/// First step counted as interior by caputo_residual: the L1 formula is not
/// consistent at the initial layer, where u has a t^beta singularity.
std::size_t caputo_residual_first_step(std::size_t n_steps);

/// max over interior steps of ||L1(u)(t_k) + A_alpha u(t_k) - B(u(t_k))|| /
/// ||A_alpha u(t_k)||, with L1 the standard L1 discretization of the Caputo
/// derivative. Deterministic trajectories only (silent noise); 0/0 -> 0.
double caputo_residual(const Trajectory& traj, const ModelParams& params);

/// CSV t,mode,coefficient (mode 1-based).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// CSV t,norm,norm_nu with norm = ||u|| and norm_nu = ||u||_{H^nu}.
void write_trajectory_summary_csv(std::ostream& out, const Trajectory& traj,
                                  const ModelParams& params);

}  // namespace fsburgers
