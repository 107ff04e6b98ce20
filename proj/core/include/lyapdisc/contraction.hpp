#pragma once

// Average projective contraction of an SL(2, R) cocycle.
//
//   H_alpha(x) = sum_j p_j |A_j x|^(-2 alpha),   kappa_alpha = max_x H_alpha(x).
//
// kappa_alpha is bracketed from both sides. The lower value comes from grid
// evaluation polished by local search. The upper value is certified: each
// summand |A x|^(-2 alpha) is unimodal on P(R^2) with its peak at the least
// expanding singular direction, so its maximum over an angular cell is known
// in closed form. Summing cell maxima encloses H_alpha on the cell, and cells
// whose enclosure exceeds the best known value are bisected.

#include "lyapdisc/cocycle.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lyapdisc {

struct KappaOptions {
  std::size_t grid_size = 4096;
  // Bisection budget for the enclosure refinement.
  std::size_t max_bisections = 100000;
  // Enclosure refinement stops once upper - lower falls below this.
  double target_gap = 1e-7;
  // Local maximisation tolerance in theta.
  double golden_tol = 1e-10;
};

struct KappaCertificate {
  double alpha = 0.0;
  int n = 1;
  std::size_t grid_size = 0;
  double grid_max = 0.0;
  // theta-Lipschitz bound on H_alpha (h_alpha_deriv_bound).
  double lipschitz_bound = 0.0;
  // grid_max + lipschitz_bound * h / 2.
  double lipschitz_upper = 0.0;
  // Cellwise enclosure after refinement.
  double enclosure_upper = 0.0;
  // Certified: min(lipschitz_upper, enclosure_upper), never below
  // kappa_refined, widened by a relative rounding allowance.
  double kappa_upper = 0.0;
  // Best value of H_alpha actually attained at a point.
  double kappa_refined = 0.0;
  double argmax_theta = 0.0;
  std::size_t bisections = 0;
};

// Sum_j p_j |A_j x|^(-2 alpha). Throws NotSl2.
double h_alpha(const Cocycle& c, double alpha, ProjPoint x);

// H_alpha on the uniform grid theta_i = i pi / grid_size.
std::vector<double> h_alpha_profile(const Cocycle& c, double alpha, std::size_t grid_size);

// 2 alpha sum_j p_j |A_j|^(2 (alpha + 1)), a bound on |dH_alpha / dtheta|.
double h_alpha_deriv_bound(const Cocycle& c, double alpha);

// n only labels the certificate; c is expected to be the already iterated
// cocycle. Throws NotSl2, InvalidArgument (alpha outside (0, 1), grid < 16).
KappaCertificate kappa_alpha(const Cocycle& c, double alpha, const KappaOptions& options, int n = 1);
KappaCertificate kappa_alpha(const Cocycle& c, double alpha, std::size_t grid_size, int n = 1);

struct AlphaSelection {
  double alpha = 0.0;
  int n = 0;
  KappaCertificate certificate;
};

// {0.05, 0.10, ..., 0.95}
std::vector<double> default_alpha_grid();

// Smallest n (then the alpha minimising kappa_upper at that n) with a
// certified kappa_upper < 1. Throws NoContraction when no pair is found
// within n_max iterates and word_cap words.
AlphaSelection select_alpha_n(const Cocycle& base, std::span<const double> alpha_grid, int n_max,
                              std::uint64_t word_cap = kDefaultWordCap,
                              const KappaOptions& options = {});

}  // namespace lyapdisc
