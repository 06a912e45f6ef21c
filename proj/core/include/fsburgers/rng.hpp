#pragma once

// Counter-based Gaussian sampling. Every variate is a pure function of
// (key, counter), so paths can be generated in any order or in parallel and
// still reproduce bit for bit.

#include <array>
#include <cstdint>

namespace fsburgers::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
Counter philox4x32(Counter counter, Key key);

Key key_from_seed(std::uint64_t seed);

/// Uniform in (0, 1] from 53 random bits.
double uniform_open0(std::uint32_t hi, std::uint32_t lo);

/// Standard normal for the given counter (Box-Muller on one Philox block).
double standard_normal(std::uint64_t seed, const Counter& counter);

/// Stream tags occupying counter word 3, keeping unrelated consumers apart.
enum class Stream : std::uint32_t {
  noise_increment = 0,
  random_field = 1,
  random_field_radius = 2,
};

}  // namespace fsburgers::rng
