#pragma once

// Run configuration for the lyapdisc tool, read from YAML.
//
//   generators:
//     - {family: S, param: 8}
//     - {family: R, param: -pi/8}
//     - {matrix: [2, 1, 1, 1]}
//     - {product: [{family: R, param: -pi/8}, {family: D, param: 2.2}, {family: R, param: pi/8}]}
//   probs: [0.5, 0.5]          # optional, uniform by default
//   iterate_n: 9               # integer or auto
//   alpha: 0.1                 # real or auto
//   mesh_N: 512
//   mc: {steps: 1000000, samples: 32, seed: 20160901}
//
// Unknown keys are rejected. Every problem is reported as a ConfigError
// carrying the line and field.

#include "lyapdisc/cocycle.hpp"
#include "lyapdisc/estimator.hpp"
#include "lyapdisc/mc_oracle.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lyapdisc::cli {

struct RunConfig {
  std::vector<GeneratorSpec> generators;
  std::optional<std::vector<double>> probs;
  // nullopt means "auto".
  std::optional<int> iterate_n;
  std::optional<double> alpha;
  std::size_t mesh_N = 1000;
  std::vector<double> mesh_points;
  std::vector<double> alpha_grid = default_alpha_grid();
  int n_max = 9;
  std::uint64_t word_cap = kDefaultWordCap;
  std::size_t seed_grid = 720;
  std::size_t kappa_grid = 4096;
  std::optional<McOptions> mc;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Normalized YAML: every default spelled out, floats with round-trip precision.
std::string serialize_config(const RunConfig& config);

// "0.4", "pi", "-pi/8", "3*pi/8", "3pi/8", "2.5e-1".
double parse_angle_expression(const std::string& text);

Cocycle build_cocycle(const RunConfig& config);
EstimateParams estimate_params(const RunConfig& config);

}  // namespace lyapdisc::cli
