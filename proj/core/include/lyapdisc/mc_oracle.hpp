#pragma once

// Monte Carlo estimate of the top Lyapunov exponent by direct random
// products: a unit vector is pushed through i.i.d. matrices drawn by p and
// renormalised every step, accumulating log |A_j v|.
//
// Draws use std::mt19937_64 seeded with (seed + sample index); a uniform
// double is (bits >> 11) * 2^-53. Both are fully specified by the standard,
// so estimates reproduce bit for bit across platforms.

#include "lyapdisc/cocycle.hpp"

#include <cstdint>
#include <string_view>

namespace lyapdisc {

inline constexpr std::string_view kMcGenerator = "mt19937_64";

struct McOptions {
  std::uint64_t steps = 1000000;
  std::uint64_t samples = 32;
  std::uint64_t seed = 20160901;
  // Discarded steps before accumulation starts.
  std::uint64_t burn_in = 1000;
  double start_theta = 0.0;

  friend bool operator==(const McOptions&, const McOptions&) = default;
};

struct McEstimate {
  double mean = 0.0;
  // Sample standard deviation / sqrt(samples); 0 for a single sample.
  double std_error = 0.0;
  std::uint64_t steps_per_sample = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 0;
  double start_theta = 0.0;
};

McEstimate mc_l1(const Cocycle& c, const McOptions& options);
McEstimate mc_l1(const Cocycle& c, std::uint64_t steps, std::uint64_t samples, std::uint64_t seed);

}  // namespace lyapdisc
