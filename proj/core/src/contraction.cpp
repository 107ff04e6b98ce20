#include "lyapdisc/contraction.hpp"

#include "lyapdisc/error.hpp"
#include "lyapdisc/parallel.hpp"
#include "golden.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>

namespace lyapdisc {

namespace {

// Relative allowance for floating point rounding in the certified bound.
constexpr double kRoundingAllowance = 1e-12;
constexpr std::size_t kMaxPeakSeeds = 4096;
constexpr std::size_t kLocalSeeds = 5;
constexpr std::size_t kChunk = 64;
// A cell counts as holding a peak when the computed peak angle lies within
// this distance, covering the rounding error of the angle itself.
constexpr double kPeakMargin = 4e-15;

bool holds_peak(double peak_theta, double lo, double hi) {
  for (double shift : {-kPi, 0.0, kPi}) {
    const double t = peak_theta + shift;
    if (t >= lo - kPeakMargin && t <= hi + kPeakMargin) return true;
  }
  return false;
}

// |A x|^2 = s1^2 sin^2(theta - phi) + s2^2 cos^2(theta - phi) with phi the
// least expanding direction. This form keeps the peak of width ~ 1 / s1^2
// that the expanded product loses to cancellation for large norms.
struct Summand {
  double s1_sq;
  double s2_sq;
  double p;
  double peak;        // max_x |A x|^(-2 alpha) = s2^(-2 alpha)
  double peak_theta;  // phi
};

std::vector<Summand> prepare(const Cocycle& c, double alpha) {
  std::vector<Summand> out;
  out.reserve(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const Matrix2& m = c.matrix(j);
    const auto [s1, s2] = m.singular_values();
    out.push_back({s1 * s1, s2 * s2, c.prob(j), std::pow(s2, -2.0 * alpha),
                   m.least_expanding_direction().theta()});
  }
  return out;
}

double norm_sq_at(const Summand& t, double theta) {
  const double d = theta - t.peak_theta;
  const double sn = std::sin(d);
  const double cs = std::cos(d);
  return t.s1_sq * sn * sn + t.s2_sq * cs * cs;
}

double evaluate(const std::vector<Summand>& terms, double alpha, double theta) {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.p * std::pow(norm_sq_at(t, theta), -alpha);
  return sum;
}

double cell_bound(const std::vector<Summand>& terms, double alpha, double lo, double hi) {
  double sum = 0.0;
  for (const auto& t : terms) {
    if (holds_peak(t.peak_theta, lo, hi)) {
      sum += t.p * t.peak;
    } else {
      const double n2 = std::min(norm_sq_at(t, lo), norm_sq_at(t, hi));
      sum += t.p * std::pow(n2, -alpha);
    }
  }
  return sum;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
}

}  // namespace

double h_alpha(const Cocycle& c, double alpha, ProjPoint x) {
  c.require_sl2();
  return evaluate(prepare(c, alpha), alpha, x.theta());
}

std::vector<double> h_alpha_profile(const Cocycle& c, double alpha, std::size_t grid_size) {
  c.require_sl2();
  const auto terms = prepare(c, alpha);
  const double h = kPi / static_cast<double>(grid_size);
  std::vector<double> values(grid_size);
  parallel_for(grid_size, [&](std::size_t i) {
    values[i] = evaluate(terms, alpha, static_cast<double>(i) * h);
  });
  return values;
}

double h_alpha_deriv_bound(const Cocycle& c, double alpha) {
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    sum += c.prob(j) * std::pow(c.matrix(j).operator_norm(), 2.0 * (alpha + 1.0));
  }
  return 2.0 * alpha * sum;
}

KappaCertificate kappa_alpha(const Cocycle& c, double alpha, std::size_t grid_size, int n) {
  KappaOptions options;
  options.grid_size = grid_size;
  return kappa_alpha(c, alpha, options, n);
}

KappaCertificate kappa_alpha(const Cocycle& c, double alpha, const KappaOptions& options, int n) {
  c.require_sl2();
  check_alpha(alpha);
  const std::size_t grid = options.grid_size;
  if (grid < 16) throw Error(ErrorCode::InvalidArgument, "kappa grid needs at least 16 points");

  const auto terms = prepare(c, alpha);
  const double h = kPi / static_cast<double>(grid);

  // Grid values and cell enclosures, streamed chunk by chunk so memory stays
  // O(k) per chunk.
  std::vector<double> values(grid);
  std::vector<double> bounds(grid);
  const std::size_t chunks = (grid + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t chunk) {
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(grid, begin + kChunk);
    std::vector<double> prev(terms.size());
    std::vector<double> cur(terms.size());
    auto fill = [&](std::vector<double>& out, std::size_t i) {
      const double theta = static_cast<double>(i) * h;
      for (std::size_t j = 0; j < terms.size(); ++j) out[j] = norm_sq_at(terms[j], theta);
    };
    fill(prev, begin);
    for (std::size_t i = begin; i < end; ++i) {
      double value = 0.0;
      for (std::size_t j = 0; j < terms.size(); ++j) value += terms[j].p * std::pow(prev[j], -alpha);
      values[i] = value;
      fill(cur, i + 1);
      const double lo = static_cast<double>(i) * h;
      const double hi = static_cast<double>(i + 1) * h;
      double bound = 0.0;
      for (std::size_t j = 0; j < terms.size(); ++j) {
        const auto& t = terms[j];
        if (holds_peak(t.peak_theta, lo, hi)) {
          bound += t.p * t.peak;
        } else {
          bound += t.p * std::pow(std::min(prev[j], cur[j]), -alpha);
        }
      }
      bounds[i] = bound;
      std::swap(prev, cur);
    }
  });

  KappaCertificate cert;
  cert.alpha = alpha;
  cert.n = n;
  cert.grid_size = grid;
  const auto grid_best = std::max_element(values.begin(), values.end());
  cert.grid_max = *grid_best;
  double best = cert.grid_max;
  double best_theta = static_cast<double>(grid_best - values.begin()) * h;
  cert.lipschitz_bound = h_alpha_deriv_bound(c, alpha);
  cert.lipschitz_upper = cert.grid_max + cert.lipschitz_bound * h / 2.0;

  auto consider = [&](double theta, double value) {
    if (value > best) {
      best = value;
      best_theta = canonical_angle(theta);
    }
  };
  auto f = [&](double theta) { return evaluate(terms, alpha, theta); };

  // Local search from the largest grid values.
  std::vector<std::size_t> order(grid);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t top = std::min(kLocalSeeds, grid);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  for (std::size_t s = 0; s < top; ++s) {
    const double theta = static_cast<double>(order[s]) * h;
    const auto [x, fx] = detail::golden_max(f, theta - h, theta + h, options.golden_tol);
    consider(x, fx);
  }

  // Seeds at the least expanding directions, largest potential peaks first.
  std::vector<std::size_t> peaks(terms.size());
  std::iota(peaks.begin(), peaks.end(), std::size_t{0});
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
    return terms[a].p * terms[a].peak > terms[b].p * terms[b].peak;
  });
  peaks.resize(std::min(peaks.size(), kMaxPeakSeeds));
  std::vector<double> peak_values(peaks.size());
  parallel_for(peaks.size(), [&](std::size_t s) { peak_values[s] = f(terms[peaks[s]].peak_theta); });
  std::vector<std::size_t> peak_order(peaks.size());
  std::iota(peak_order.begin(), peak_order.end(), std::size_t{0});
  std::stable_sort(peak_order.begin(), peak_order.end(),
                   [&](std::size_t a, std::size_t b) { return peak_values[a] > peak_values[b]; });
  for (std::size_t s = 0; s < peak_order.size(); ++s) {
    const double theta = terms[peaks[peak_order[s]]].peak_theta;
    consider(theta, peak_values[peak_order[s]]);
    if (s < kLocalSeeds) {
      const auto [x, fx] = detail::golden_max(f, theta - h, theta + h, options.golden_tol);
      consider(x, fx);
    }
  }

  // Enclosure refinement.
  struct Cell {
    double bound;
    double lo;
    double hi;
    bool operator<(const Cell& o) const { return bound < o.bound || (bound == o.bound && lo > o.lo); }
  };
  std::vector<Cell> initial;
  initial.reserve(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    initial.push_back({bounds[i], static_cast<double>(i) * h, static_cast<double>(i + 1) * h});
  }
  std::priority_queue<Cell> cells(std::less<Cell>{}, std::move(initial));
  std::size_t bisections = 0;
  // Cells narrower than the peak margin gain nothing from splitting.
  double retired = 0.0;
  while (!cells.empty() && bisections < options.max_bisections) {
    const Cell cell = cells.top();
    if (cell.bound <= best + options.target_gap) break;
    cells.pop();
    if (cell.hi - cell.lo < 4.0 * kPeakMargin) {
      retired = std::max(retired, cell.bound);
      continue;
    }
    const double mid = 0.5 * (cell.lo + cell.hi);
    consider(mid, f(mid));
    cells.push({cell_bound(terms, alpha, cell.lo, mid), cell.lo, mid});
    cells.push({cell_bound(terms, alpha, mid, cell.hi), mid, cell.hi});
    ++bisections;
  }
  cert.enclosure_upper = std::max(retired, cells.empty() ? 0.0 : cells.top().bound);
  cert.bisections = bisections;
  cert.kappa_refined = best;
  cert.argmax_theta = best_theta;
  cert.kappa_upper = std::max(std::min(cert.lipschitz_upper, cert.enclosure_upper), best) *
                     (1.0 + kRoundingAllowance);
  return cert;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
  return grid;
}

AlphaSelection select_alpha_n(const Cocycle& base, std::span<const double> alpha_grid, int n_max,
                              std::uint64_t word_cap, const KappaOptions& options) {
  base.require_sl2();
  if (alpha_grid.empty()) throw Error(ErrorCode::InvalidArgument, "alpha grid is empty");
  for (double a : alpha_grid) check_alpha(a);

  double closest = INFINITY;
  int last_n = 0;
  for (int n = 1; n <= n_max; ++n) {
    if (word_count(base.size(), n) > word_cap) break;
    const Cocycle iterated = iterate_cocycle(base, n, word_cap);
    last_n = n;
    std::optional<AlphaSelection> pick;
    for (double alpha : alpha_grid) {
      const KappaCertificate cert = kappa_alpha(iterated, alpha, options, n);
      closest = std::min(closest, cert.kappa_upper);
      if (cert.kappa_upper < 1.0 && (!pick || cert.kappa_upper < pick->certificate.kappa_upper)) {
        pick = AlphaSelection{alpha, n, cert};
      }
    }
    if (pick) return *pick;
  }
  std::ostringstream os;
  os << "no (alpha, n) with kappa_upper < 1 up to n = " << last_n
     << " (smallest kappa_upper " << closest << ")";
  throw Error(ErrorCode::NoContraction, os.str());
}

}  // namespace lyapdisc
