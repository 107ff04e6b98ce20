#pragma once

// Finite-state discretization of the projective action: a sorted mesh F,
// nearest-point maps f_j : F -> F, and the column-stochastic matrix
//
//   P_F(w, v) = sum_{j : f_j(v) = w} p_j .

#include "lyapdisc/cocycle.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lyapdisc {

class Mesh {
 public:
  // theta_i = i pi / n, i = 0..n-1. Throws InvalidArgument for n < 2.
  static Mesh uniform(std::size_t n);

  // Arbitrary mesh; angles must be strictly increasing in [0, pi).
  explicit Mesh(std::vector<double> thetas);

  std::size_t size() const { return thetas_.size(); }
  ProjPoint point(std::size_t i) const { return ProjPoint(thetas_[i]); }
  const std::vector<double>& thetas() const { return thetas_; }
  bool is_uniform() const { return uniform_; }

  // Index minimising delta(point(i), x); ties go to the smaller index.
  std::size_t nearest(ProjPoint x) const;

 private:
  Mesh(std::vector<double> thetas, bool uniform);

  std::vector<double> thetas_;
  bool uniform_ = false;
};

inline std::size_t nearest(const Mesh& mesh, ProjPoint x) { return mesh.nearest(x); }

// Compressed sparse column storage of a column-stochastic matrix.
class StochasticMatrix {
 public:
  struct Entry {
    std::size_t row;
    double value;
  };

  StochasticMatrix() = default;
  // columns[v] lists (row, value) pairs of column v; duplicate rows are
  // merged. Throws InvalidArgument on negative entries or a column sum off
  // by more than 1e-12.
  explicit StochasticMatrix(const std::vector<std::vector<Entry>>& columns);

  std::size_t size() const { return col_start_.empty() ? 0 : col_start_.size() - 1; }
  std::size_t nonzeros() const { return rows_.size(); }

  // Entry (row, col), zero when absent.
  double at(std::size_t row, std::size_t col) const;
  double column_sum(std::size_t col) const;

  // y = P x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;

  // Nonzero rows of column v, ascending.
  template <class F>
  void for_each_in_column(std::size_t col, F&& f) const {
    for (std::size_t e = col_start_[col]; e < col_start_[col + 1]; ++e) f(rows_[e], values_[e]);
  }

 private:
  std::vector<std::size_t> col_start_;
  std::vector<std::size_t> rows_;
  std::vector<double> values_;
};

struct Discretization {
  Mesh mesh;
  // fmaps[j][i] = index of f_j(theta_i).
  std::vector<std::vector<std::size_t>> fmaps;
  StochasticMatrix pmatrix;
};

// fmaps[j][i] = nearest(mesh, Phi_{A_j}(theta_i)). Throws NotSl2.
Discretization discretize(const Cocycle& c, const Mesh& mesh);

// P_F rebuilt from index maps and weights.
StochasticMatrix assemble_pmatrix(const std::vector<std::vector<std::size_t>>& fmaps,
                                  const std::vector<double>& probs, std::size_t mesh_size);

struct MixingReport {
  bool mixing = false;
  std::size_t components = 0;
  std::size_t closed_classes = 0;
  // Sizes of the closed classes, in order of their smallest state.
  std::vector<std::size_t> closed_class_sizes;
  // Period of the closed class when there is exactly one, 0 otherwise.
  std::size_t period = 0;
  std::string reason;
};

// Single closed communicating class that is aperiodic.
MixingReport check_mixing(const StochasticMatrix& p);
inline MixingReport check_mixing(const Discretization& d) { return check_mixing(d.pmatrix); }

struct StationaryOptions {
  double tolerance = 1e-13;
  std::size_t max_iterations = 1000000;
  // Switch to Cesaro averages after this many plain iterations.
  std::size_t cesaro_after = 20000;
};

struct StationaryVector {
  std::vector<double> weights;
  // |P nu - nu|_1 of the returned weights.
  double residual = 0.0;
  std::size_t iterations = 0;
  bool averaged = false;
};

// Power iteration from the uniform vector. Throws NotMixing (after
// check_mixing) or NoConvergence carrying the achieved residual.
StationaryVector stationary(const StochasticMatrix& p, const StationaryOptions& options = {});
inline StationaryVector stationary(const Discretization& d, const StationaryOptions& options = {}) {
  return stationary(d.pmatrix, options);
}

// |P nu - nu|_1
double stationary_residual(const StochasticMatrix& p, const std::vector<double>& nu);

}  // namespace lyapdisc
