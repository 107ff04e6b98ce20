#pragma once

// Finite random cocycles (A_1..A_k, p_1..p_k) over a Bernoulli shift, the
// S / D / R generator families, and n-fold iteration.

#include "lyapdisc/projgeom.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lyapdisc {

inline constexpr std::uint64_t kDefaultWordCap = std::uint64_t{1} << 16;

enum class Family {
  S,         // [[l, -1], [1, 0]]
  D,         // diag(l, 1/l)
  R,         // rotation by l
  Explicit,  // four entries given directly
  Product,   // left-to-right product of nested specs
};

std::string_view family_name(Family f);

struct GeneratorSpec {
  Family family = Family::Explicit;
  double param = 0.0;
  std::optional<Matrix2> matrix;
  std::vector<GeneratorSpec> factors;

  static GeneratorSpec s(double lambda) { return {Family::S, lambda, std::nullopt, {}}; }
  static GeneratorSpec d(double lambda) { return {Family::D, lambda, std::nullopt, {}}; }
  static GeneratorSpec r(double angle) { return {Family::R, angle, std::nullopt, {}}; }
  static GeneratorSpec explicit_matrix(const Matrix2& m) { return {Family::Explicit, 0.0, m, {}}; }
  static GeneratorSpec product(std::vector<GeneratorSpec> fs) {
    return {Family::Product, 0.0, std::nullopt, std::move(fs)};
  }

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

// Throws BadParam for D with lambda = 0, a missing explicit matrix, or an
// empty product.
Matrix2 make_generator(const GeneratorSpec& spec);

class Cocycle {
 public:
  // Validates: k >= 1, matching lengths, probabilities strictly positive and
  // summing to 1 within 1e-12, every matrix invertible.
  Cocycle(std::vector<Matrix2> mats, std::vector<double> probs);

  // Equal weights 1/k.
  static Cocycle uniform(std::vector<Matrix2> mats);

  std::size_t size() const { return mats_.size(); }
  const std::vector<Matrix2>& mats() const { return mats_; }
  const std::vector<double>& probs() const { return probs_; }
  const Matrix2& matrix(std::size_t j) const { return mats_[j]; }
  double prob(std::size_t j) const { return probs_[j]; }

  // True when every matrix is in SL(2, R). Iterates of an SL(2, R) cocycle
  // keep the flag even when long products no longer resolve det = 1 in
  // double precision.
  bool is_sl2() const { return sl2_; }

  // Throws NotSl2 unless is_sl2().
  void require_sl2() const;

 private:
  Cocycle(std::vector<Matrix2> mats, std::vector<double> probs, double prob_tolerance,
          std::optional<bool> sl2);
  friend Cocycle iterate_cocycle(const Cocycle&, int, std::uint64_t);

  std::vector<Matrix2> mats_;
  std::vector<double> probs_;
  bool sl2_ = false;
};

// All k^n words (x_0, .., x_{n-1}) in lexicographic order (x_0 slowest), each
// mapped to A(x_{n-1}) ... A(x_1) A(x_0) with probability p_{x_0} ... p_{x_{n-1}}.
// Throws CapExceeded when k^n > word_cap.
Cocycle iterate_cocycle(const Cocycle& c, int n, std::uint64_t word_cap = kDefaultWordCap);

// Number of words k^n, saturating at UINT64_MAX.
std::uint64_t word_count(std::size_t k, int n);

// max_j |A_j| (spectral norm).
double max_norm(const Cocycle& c);

}  // namespace lyapdisc
