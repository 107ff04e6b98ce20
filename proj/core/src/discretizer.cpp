#include "lyapdisc/discretizer.hpp"

#include "lyapdisc/error.hpp"
#include "lyapdisc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace lyapdisc {

// ---------------------------------------------------------------------------
// Mesh

Mesh::Mesh(std::vector<double> thetas, bool uniform) : thetas_(std::move(thetas)), uniform_(uniform) {}

Mesh Mesh::uniform(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "mesh needs at least two points");
  std::vector<double> thetas(n);
  for (std::size_t i = 0; i < n; ++i) thetas[i] = static_cast<double>(i) * kPi / static_cast<double>(n);
  return Mesh(std::move(thetas), true);
}

Mesh::Mesh(std::vector<double> thetas) : thetas_(std::move(thetas)) {
  if (thetas_.size() < 2) throw Error(ErrorCode::InvalidArgument, "mesh needs at least two points");
  for (std::size_t i = 0; i < thetas_.size(); ++i) {
    const double t = thetas_[i];
    if (!(t >= 0.0 && t < kPi)) throw Error(ErrorCode::InvalidArgument, "mesh angle outside [0, pi)");
    if (i > 0 && !(t > thetas_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "mesh angles must be strictly increasing");
    }
  }
}

std::size_t Mesh::nearest(ProjPoint x) const {
  const std::size_t n = thetas_.size();
  const double theta = x.theta();
  std::size_t candidates[3];
  std::size_t count = 0;
  if (uniform_) {
    auto i0 = static_cast<std::size_t>(std::floor(theta * static_cast<double>(n) / kPi));
    i0 = std::min(i0, n - 1);
    candidates[count++] = (i0 + n - 1) % n;
    candidates[count++] = i0;
    candidates[count++] = (i0 + 1) % n;
  } else {
    const auto it = std::upper_bound(thetas_.begin(), thetas_.end(), theta);
    const auto above = static_cast<std::size_t>(it - thetas_.begin());
    candidates[count++] = (above + n - 1) % n;
    candidates[count++] = above % n;
  }
  std::size_t best = candidates[0];
  double best_dist = proj_metric(point(best), x);
  for (std::size_t c = 1; c < count; ++c) {
    const std::size_t i = candidates[c];
    const double dist = proj_metric(point(i), x);
    if (dist < best_dist || (dist == best_dist && i < best)) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// StochasticMatrix

StochasticMatrix::StochasticMatrix(const std::vector<std::vector<Entry>>& columns) {
  col_start_.reserve(columns.size() + 1);
  col_start_.push_back(0);
  const std::size_t n = columns.size();
  std::vector<Entry> col;
  for (std::size_t v = 0; v < n; ++v) {
    col = columns[v];
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
    double sum = 0.0;
    for (std::size_t e = 0; e < col.size(); ++e) {
      if (col[e].row >= n) throw Error(ErrorCode::InvalidArgument, "row index out of range");
      if (!(col[e].value >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative transition weight");
      if (!rows_.empty() && rows_.size() > col_start_.back() && rows_.back() == col[e].row) {
        values_.back() += col[e].value;
      } else {
        rows_.push_back(col[e].row);
        values_.push_back(col[e].value);
      }
      sum += col[e].value;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      std::ostringstream os;
      os << "column " << v << " sums to " << sum;
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
    col_start_.push_back(rows_.size());
  }
}

double StochasticMatrix::at(std::size_t row, std::size_t col) const {
  const auto begin = rows_.begin() + static_cast<std::ptrdiff_t>(col_start_[col]);
  const auto end = rows_.begin() + static_cast<std::ptrdiff_t>(col_start_[col + 1]);
  const auto it = std::lower_bound(begin, end, row);
  if (it == end || *it != row) return 0.0;
  return values_[static_cast<std::size_t>(it - rows_.begin())];
}

double StochasticMatrix::column_sum(std::size_t col) const {
  double sum = 0.0;
  for (std::size_t e = col_start_[col]; e < col_start_[col + 1]; ++e) sum += values_[e];
  return sum;
}

void StochasticMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t n = size();
  y.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const double xv = x[v];
    if (xv == 0.0) continue;
    for (std::size_t e = col_start_[v]; e < col_start_[v + 1]; ++e) y[rows_[e]] += values_[e] * xv;
  }
}

// ---------------------------------------------------------------------------
// Discretization

StochasticMatrix assemble_pmatrix(const std::vector<std::vector<std::size_t>>& fmaps,
                                  const std::vector<double>& probs, std::size_t mesh_size) {
  if (fmaps.size() != probs.size()) throw Error(ErrorCode::InvalidArgument, "map and weight counts differ");
  std::vector<std::vector<StochasticMatrix::Entry>> columns(mesh_size);
  for (std::size_t v = 0; v < mesh_size; ++v) {
    columns[v].reserve(fmaps.size());
    for (std::size_t j = 0; j < fmaps.size(); ++j) columns[v].push_back({fmaps[j][v], probs[j]});
  }
  return StochasticMatrix(columns);
}

Discretization discretize(const Cocycle& c, const Mesh& mesh) {
  const std::size_t n = mesh.size();
  std::vector<std::vector<std::size_t>> fmaps(c.size(), std::vector<std::size_t>(n));
  parallel_for(c.size(), [&](std::size_t j) {
    const Matrix2& a = c.matrix(j);
    for (std::size_t i = 0; i < n; ++i) {
      fmaps[j][i] = mesh.nearest(ProjPoint::from_vector(a * mesh.point(i).representative()));
    }
  });
  StochasticMatrix p = assemble_pmatrix(fmaps, c.probs(), n);
  return Discretization{mesh, std::move(fmaps), std::move(p)};
}

// ---------------------------------------------------------------------------
// Mixing

namespace {

// Iterative Tarjan. Returns the component id of each vertex; ids are assigned
// in order of completion.
std::vector<std::size_t> strongly_connected(const StochasticMatrix& p, std::size_t& count) {
  const std::size_t n = p.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t v = 0; v < n; ++v) {
    p.for_each_in_column(v, [&](std::size_t w, double value) {
      if (value > 0.0) succ[v].push_back(w);
    });
  }

  std::size_t next_index = 0;
  count = 0;
  struct Frame {
    std::size_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < succ[f.v].size()) {
        const std::size_t w = succ[f.v][f.edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
    }
  }
  return comp;
}

}  // namespace

MixingReport check_mixing(const StochasticMatrix& p) {
  MixingReport report;
  const std::size_t n = p.size();
  if (n == 0) {
    report.reason = "empty matrix";
    return report;
  }
  std::size_t count = 0;
  const auto comp = strongly_connected(p, count);
  report.components = count;

  std::vector<bool> closed(count, true);
  std::vector<std::size_t> sizes(count, 0);
  std::vector<std::size_t> first(count, n);
  for (std::size_t v = 0; v < n; ++v) {
    ++sizes[comp[v]];
    first[comp[v]] = std::min(first[comp[v]], v);
    p.for_each_in_column(v, [&](std::size_t w, double value) {
      if (value > 0.0 && comp[w] != comp[v]) closed[comp[v]] = false;
    });
  }
  std::vector<std::size_t> closed_ids;
  for (std::size_t c = 0; c < count; ++c) {
    if (closed[c]) closed_ids.push_back(c);
  }
  std::sort(closed_ids.begin(), closed_ids.end(),
            [&](std::size_t a, std::size_t b) { return first[a] < first[b]; });
  report.closed_classes = closed_ids.size();
  for (std::size_t c : closed_ids) report.closed_class_sizes.push_back(sizes[c]);

  if (closed_ids.size() != 1) {
    std::ostringstream os;
    os << closed_ids.size() << " closed classes";
    report.reason = os.str();
    return report;
  }

  // Period: gcd over class edges (u -> w) of level(u) + 1 - level(w), with
  // levels from a BFS inside the class.
  const std::size_t cls = closed_ids.front();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(n, kNone);
  std::queue<std::size_t> queue;
  level[first[cls]] = 0;
  queue.push(first[cls]);
  std::size_t period = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop();
    p.for_each_in_column(u, [&](std::size_t w, double value) {
      if (!(value > 0.0) || comp[w] != cls) return;
      if (level[w] == kNone) {
        level[w] = level[u] + 1;
        queue.push(w);
      } else {
        const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[w]);
        period = std::gcd(period, static_cast<std::size_t>(diff < 0 ? -diff : diff));
      }
    });
  }
  report.period = period;
  report.mixing = period == 1;
  if (!report.mixing) {
    std::ostringstream os;
    os << "closed class of size " << sizes[cls] << " has period " << period;
    report.reason = os.str();
  }
  return report;
}

// ---------------------------------------------------------------------------
// Stationary vector

double stationary_residual(const StochasticMatrix& p, const std::vector<double>& nu) {
  std::vector<double> image;
  p.multiply(nu, image);
  double r = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) r += std::abs(image[i] - nu[i]);
  return r;
}

StationaryVector stationary(const StochasticMatrix& p, const StationaryOptions& options) {
  const MixingReport mixing = check_mixing(p);
  if (!mixing.mixing) {
    throw Error(ErrorCode::NotMixing,
                "discretized chain is not mixing (" + mixing.reason + "); try a larger mesh");
  }
  const std::size_t n = p.size();
  std::vector<double> nu(n, 1.0 / static_cast<double>(n));
  std::vector<double> next;
  std::vector<double> average;
  std::size_t averaged_count = 0;

  StationaryVector out;
  double residual = INFINITY;
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    p.multiply(nu, next);
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - nu[i]);
    nu.swap(next);
    if (residual < options.tolerance) break;

    if (it >= options.cesaro_after) {
      if (averaged_count == 0) average.assign(n, 0.0);
      ++averaged_count;
      const double w = 1.0 / static_cast<double>(averaged_count);
      for (std::size_t i = 0; i < n; ++i) average[i] += w * (nu[i] - average[i]);
      if (averaged_count % 1000 == 0) {
        const double avg_residual = stationary_residual(p, average);
        if (avg_residual < options.tolerance) {
          nu = average;
          out.averaged = true;
          break;
        }
      }
    }
  }

  const double total = std::accumulate(nu.begin(), nu.end(), 0.0);
  for (double& w : nu) w /= total;
  out.residual = stationary_residual(p, nu);
  out.iterations = it;
  if (!(out.residual < 1e-12)) throw NoConvergenceError(out.residual, it);
  out.weights = std::move(nu);
  return out;
}

}  // namespace lyapdisc
