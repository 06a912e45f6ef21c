#include "fsburgers/dynamics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "fsburgers/csv.hpp"
#include "fsburgers/rng.hpp"

namespace fsburgers {

Coupling parse_coupling(std::string_view label) {
  if (label == "diagonal") return Coupling::diagonal;
  if (label == "pointwise") return Coupling::pointwise;
  if (label == "additive") return Coupling::additive;
  throw std::invalid_argument("unknown coupling '" + std::string(label) +
                              "' (expected diagonal, pointwise or additive)");
}

std::string_view to_string(Coupling c) {
  switch (c) {
    case Coupling::diagonal: return "diagonal";
    case Coupling::pointwise: return "pointwise";
    case Coupling::additive: return "additive";
  }
  return "unknown";
}

void NoiseSpec::validate() const {
  if (!(q_decay > 1.0)) {
    throw std::invalid_argument("q_decay must be > 1 for a trace-class Q (got " +
                                csv::format_number(q_decay) + ")");
  }
  if (!(q_scale >= 0.0) || !std::isfinite(q_scale)) {
    throw std::invalid_argument("q_scale must be >= 0 (got " + csv::format_number(q_scale) + ")");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be >= 0 (got " + csv::format_number(sigma) + ")");
  }
}

double NoiseSpec::q(std::size_t mode) const {
  return q_scale * std::pow(static_cast<double>(mode), -q_decay);
}

std::vector<double> NoisePath::step(std::size_t k) const {
  std::vector<double> out(n_modes);
  for (std::size_t n = 0; n < n_modes; ++n) out[n] = increment(n, k);
  return out;
}

NoisePath NoisePath::zeros(std::size_t n_modes, std::size_t n_steps, double dt) {
  NoisePath p;
  p.n_modes = n_modes;
  p.n_steps = n_steps;
  p.dt = dt;
  p.increments.assign(n_modes * n_steps, 0.0);
  return p;
}

NoisePath sample_path(const NoiseSpec& spec, const SpectralBasis& basis, double dt,
                      std::size_t n_steps, std::uint64_t master_seed, std::uint64_t path_index) {
  spec.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("sample_path: dt must be > 0");
  NoisePath p = NoisePath::zeros(basis.n_modes(), n_steps, dt);
  p.master_seed = master_seed;
  p.path_index = path_index;
  if (spec.q_scale == 0.0) return p;
  const auto path_word = static_cast<std::uint32_t>(path_index);
  const auto tag = static_cast<std::uint32_t>(rng::Stream::noise_increment) |
                   (static_cast<std::uint32_t>(path_index >> 32) << 8);
  for (std::size_t n = 0; n < p.n_modes; ++n) {
    const double scale = std::sqrt(spec.q(n + 1) * dt);
    for (std::size_t k = 0; k < n_steps; ++k) {
      const rng::Counter ctr = {path_word, static_cast<std::uint32_t>(n),
                                static_cast<std::uint32_t>(k), tag};
      p.increments[n * n_steps + k] = scale * rng::standard_normal(master_seed, ctr);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Binary dump

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  if (!in) throw std::runtime_error("read_noise_path: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_noise_path(std::ostream& out, const NoisePath& path) {
  put_u64(out, path.n_modes);
  put_u64(out, path.n_steps);
  put_u64(out, std::bit_cast<std::uint64_t>(path.dt));
  put_u64(out, path.master_seed);
  put_u64(out, path.path_index);
  for (double v : path.increments) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

NoisePath read_noise_path(std::istream& in) {
  NoisePath p;
  p.n_modes = get_u64(in);
  p.n_steps = get_u64(in);
  p.dt = std::bit_cast<double>(get_u64(in));
  p.master_seed = get_u64(in);
  p.path_index = get_u64(in);
  if (p.n_modes > (1u << 20) || p.n_steps > (1u << 26)) {
    throw std::runtime_error("read_noise_path: implausible dimensions");
  }
  p.increments.resize(p.n_modes * p.n_steps);
  for (double& v : p.increments) v = std::bit_cast<double>(get_u64(in));
  return p;
}

// ---------------------------------------------------------------------------

SpectralField nonlinearity(const SpectralField& u, const SpectralBasis& basis) {
  if (u.size() != basis.n_modes()) throw std::invalid_argument("nonlinearity: size mismatch");
  const std::size_t n_modes = basis.n_modes();
  std::vector<double> product(basis.grid_size());
  for (std::size_t j = 0; j < basis.grid_size(); ++j) {
    double value = 0.0, slope = 0.0;
    for (std::size_t n = 0; n < n_modes; ++n) {
      value += u[n] * basis.sine(j, n);
      slope += u[n] * basis.dsine(j, n);
    }
    product[j] = value * slope;
  }
  return to_coeffs(product, basis);
}

SpectralField noise_coefficient(const SpectralField& u, const NoiseSpec& spec,
                                std::span<const double> dw, const SpectralBasis& basis) {
  const std::size_t n_modes = basis.n_modes();
  if (u.size() != n_modes || dw.size() != n_modes) {
    throw std::invalid_argument("noise_coefficient: size mismatch");
  }
  SpectralField out(n_modes);
  if (spec.sigma == 0.0) return out;
  switch (spec.coupling) {
    case Coupling::diagonal:
      for (std::size_t n = 0; n < n_modes; ++n) out[n] = spec.sigma * u[n] * dw[n];
      break;
    case Coupling::additive:
      for (std::size_t n = 0; n < n_modes; ++n) out[n] = spec.sigma * dw[n];
      break;
    case Coupling::pointwise: {
      const std::vector<double> ug = to_grid(u, basis);
      const std::vector<double> wg = to_grid(SpectralField(std::vector<double>(dw.begin(), dw.end())), basis);
      std::vector<double> prod(ug.size());
      for (std::size_t j = 0; j < ug.size(); ++j) prod[j] = ug[j] * wg[j];
      out = to_coeffs(prod, basis);
      out *= spec.sigma;
      break;
    }
  }
  return out;
}

double noise_operator_norm(const SpectralField& u, const NoiseSpec& spec) {
  double s = 0.0;
  switch (spec.coupling) {
    case Coupling::diagonal:
      for (std::size_t n = 0; n < u.size(); ++n) s += spec.q(n + 1) * u[n] * u[n];
      break;
    case Coupling::additive:
      for (std::size_t n = 0; n < u.size(); ++n) s += spec.q(n + 1);
      break;
    case Coupling::pointwise:
      throw std::invalid_argument("noise_operator_norm: no closed form for pointwise coupling");
  }
  return spec.sigma * std::sqrt(s);
}

SpectralField random_field(std::size_t n_modes, std::uint64_t seed, std::uint32_t index,
                           std::uint32_t tag) {
  SpectralField f(n_modes);
  const auto stream = static_cast<std::uint32_t>(rng::Stream::random_field) | (tag << 8);
  for (std::size_t n = 0; n < n_modes; ++n) {
    f[n] = rng::standard_normal(seed, {index, static_cast<std::uint32_t>(n), 0u, stream});
  }
  return f;
}

AssumptionBReport check_assumption_B(const SpectralBasis& basis, std::size_t n_samples, double s,
                                     std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("check_assumption_B: sample count must be >= 1");
  AssumptionBReport report;
  report.n_modes = basis.n_modes();
  report.n_samples = n_samples;
  report.s = s;

  // Random direction, radius uniform in (0,1].
  auto sample = [&](std::uint32_t index) {
    SpectralField f = random_field(basis.n_modes(), seed, index);
    const double norm = l2_norm(f);
    if (norm == 0.0) return f;
    const auto stream = static_cast<std::uint32_t>(rng::Stream::random_field_radius);
    const rng::Counter r = rng::philox4x32({index, 0u, 0u, stream}, rng::key_from_seed(seed));
    f *= rng::uniform_open0(r[0], r[1]) / norm;
    return f;
  };

  for (std::size_t i = 0; i < n_samples; ++i) {
    const SpectralField u = sample(static_cast<std::uint32_t>(2 * i));
    const SpectralField v = sample(static_cast<std::uint32_t>(2 * i + 1));
    const double nu = l2_norm(u);
    const double nv = l2_norm(v);
    const SpectralField bu = nonlinearity(u, basis);
    if (nu == 0.0) {
      ++report.skipped;
      continue;
    }
    report.max_growth_ratio =
        std::max(report.max_growth_ratio, sobolev_norm(bu, s, basis) / (nu * nu));
    const double duv = l2_norm(u - v);
    if (duv == 0.0) {
      ++report.skipped;
      continue;
    }
    const SpectralField diff = bu - nonlinearity(v, basis);
    report.max_lipschitz_ratio =
        std::max(report.max_lipschitz_ratio, sobolev_norm(diff, s, basis) / ((nu + nv) * duv));
  }
  return report;
}

}  // namespace fsburgers
