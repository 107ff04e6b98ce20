#pragma once

// Lyapunov exponent estimate from a discretized stationary measure, with
// the a-posteriori error bound
//
//   |L1(A) - L1(A, F)| <= Delta_alpha * V_alpha / (1 - kappa_alpha).
//
// Notation:
//   phi_j(x) = log |A_j x|
//   psi_j    = L phi_j, with (L f)(x) = sum_i p_i f(Phi_{A_i} x)
//   L1(A, F) = sum_j p_j sum_{x in F} psi_j(x) nu_F(x)
//   Delta_alpha = max_{v in F} sum_j p_j delta(Phi_{A_j} v, f_j(v))^alpha
//   V_alpha  = sum_j p_j v_alpha(psi_j)
//
// v_alpha(f) = sup_{x != y} |f(x) - f(y)| / delta(x, y)^alpha. The projective
// line has delta-diameter 1, so the diam^alpha normalisation is 1.

#include "lyapdisc/contraction.hpp"
#include "lyapdisc/discretizer.hpp"
#include "lyapdisc/mc_oracle.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace lyapdisc {

double phi_j(const Cocycle& c, std::size_t j, ProjPoint x);
double psi_j(const Cocycle& c, std::size_t j, ProjPoint x);

// (L f)(x) for an arbitrary function on P(R^2).
double transfer(const Cocycle& c, const std::function<double(ProjPoint)>& f, ProjPoint x);

// sum_j p_j sum_x psi_j(x) nu(x)
double l1_estimate(const Cocycle& c, const Discretization& d, const StationaryVector& nu);
// sum_j p_j sum_x phi_j(x) nu(x), the same sum before applying L.
double l1_estimate_direct(const Cocycle& c, const Discretization& d, const StationaryVector& nu);

double delta_alpha(const Cocycle& c, const Discretization& d, double alpha);

struct HolderOptions {
  std::size_t seed_grid = 720;
  std::size_t top_pairs = 10;
  // Golden-section tolerance in theta.
  double tolerance = 1e-10;
  std::size_t max_rounds = 20;
  bool newton = true;
  // Central-difference step for f', f'' in the Newton map.
  double fd_step = 1e-5;
  std::size_t newton_iterations = 30;
  std::size_t newton_pairs = 3;
};

struct HolderEstimate {
  double value = 0.0;
  // Best ratio over the seed grid alone; value >= seed_max always.
  double seed_max = 0.0;
  double x_theta = 0.0;
  double y_theta = 0.0;
};

// Estimate of v_alpha(f). Not certified: it is the largest ratio found by a
// pair scan on the seed grid, coordinate-wise golden-section refinement of
// the best pairs, and the Newton map on critical points of
// K(x, y) = (f(x) - f(y)) / (x - y)^alpha started from extreme-point pairs.
HolderEstimate holder_estimate(const std::function<double(double)>& f, double alpha,
                               const HolderOptions& options = {});
double holder_constant(const std::function<double(ProjPoint)>& f, double alpha,
                       const HolderOptions& options = {});

// sum_j p_j v_alpha(psi_j). Throws NotSl2.
double v_alpha_avg(const Cocycle& c, double alpha, const HolderOptions& options = {});

// Discretize, check mixing and solve for nu_F on an already iterated cocycle.
struct StationaryResult {
  Discretization discretization;
  StationaryVector nu;
  double l1 = 0.0;
};
StationaryResult solve_stationary(const Cocycle& c, const Mesh& mesh);

struct EstimateParams {
  // Both unset: search with select_alpha_n. Both set: use as given.
  std::optional<double> alpha;
  std::optional<int> n;
  std::size_t mesh_size = 1000;
  // Explicit mesh angles; when non-empty they replace the uniform mesh.
  std::vector<double> mesh_points;
  std::vector<double> alpha_grid = default_alpha_grid();
  int n_max = 9;
  std::uint64_t word_cap = kDefaultWordCap;
  KappaOptions kappa;
  HolderOptions holder;
  std::optional<McOptions> mc;
};

struct EstimateReport {
  double alpha = 0.0;
  int n = 0;
  // Largest attained value of H_alpha (sigma_alpha).
  double kappa = 0.0;
  // Certified upper bound used in the error bound.
  double kappa_upper = 0.0;
  std::size_t mesh_size = 0;
  double delta_alpha = 0.0;
  double v_alpha_avg = 0.0;
  // Estimate for the n-fold iterated cocycle.
  double l1_estimate = 0.0;
  double l1_per_step = 0.0;
  // delta_alpha * v_alpha_avg / (1 - kappa_upper)
  double error_bound = 0.0;
  double stationary_residual = 0.0;
  std::size_t word_count = 0;
  std::optional<McEstimate> mc_crosscheck;
};

// Full pipeline on the base cocycle. Throws NoContraction, NotMixing,
// CapExceeded.
EstimateReport full_estimate(const Cocycle& base, const EstimateParams& params);

// Chooses (alpha, n) per params and returns the certificate on the iterated
// cocycle. Throws NoContraction when kappa_upper >= 1.
AlphaSelection resolve_alpha_n(const Cocycle& base, const EstimateParams& params);

}  // namespace lyapdisc
