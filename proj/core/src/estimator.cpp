#include "lyapdisc/estimator.hpp"

#include "lyapdisc/error.hpp"
#include "lyapdisc/parallel.hpp"
#include "golden.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lyapdisc {

namespace {

Vec2 unit_image(const Matrix2& a, Vec2 x) {
  const Vec2 y = a * x;
  const double n = y.norm();
  return {y.x / n, y.y / n};
}

double half_log_norm_sq(const Matrix2& a, Vec2 y) { return 0.5 * std::log((a * y).norm_squared()); }

// psi_j evaluated from precomputed unit images Phi_{A_i} x.
double psi_from_images(const Cocycle& c, std::size_t j, const std::vector<Vec2>& images) {
  const Matrix2& a = c.matrix(j);
  double sum = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) sum += c.prob(i) * half_log_norm_sq(a, images[i]);
  return sum;
}

std::vector<Vec2> images_at(const Cocycle& c, double theta) {
  const Vec2 x{std::cos(theta), std::sin(theta)};
  std::vector<Vec2> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = unit_image(c.matrix(i), x);
  return out;
}

struct Pair {
  double ratio;
  double x;
  double y;
};

class HolderSearch {
 public:
  HolderSearch(const std::function<double(double)>& f, double alpha, const HolderOptions& options)
      : f_(f), alpha_(alpha), options_(options) {}

  HolderEstimate run(const std::vector<double>& seed_values) const {
    const std::size_t g = seed_values.size();
    const double h = kPi / static_cast<double>(g);
    HolderEstimate out;

    // (i) all pairs of the seed grid; delta depends only on the index gap.
    std::vector<double> denom(g);
    for (std::size_t d = 1; d < g; ++d) {
      denom[d] = std::pow(std::abs(std::sin(static_cast<double>(d) * h)), alpha_);
    }
    const std::size_t keep = std::max<std::size_t>(1, options_.top_pairs);
    std::vector<Pair> top;  // min-heap on ratio
    auto heap_cmp = [](const Pair& a, const Pair& b) { return a.ratio > b.ratio; };
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = i + 1; j < g; ++j) {
        const double r = std::abs(seed_values[i] - seed_values[j]) / denom[j - i];
        if (top.size() < keep) {
          top.push_back({r, static_cast<double>(i) * h, static_cast<double>(j) * h});
          std::push_heap(top.begin(), top.end(), heap_cmp);
        } else if (r > top.front().ratio) {
          std::pop_heap(top.begin(), top.end(), heap_cmp);
          top.back() = {r, static_cast<double>(i) * h, static_cast<double>(j) * h};
          std::push_heap(top.begin(), top.end(), heap_cmp);
        }
      }
    }
    std::sort_heap(top.begin(), top.end(), heap_cmp);  // descending ratio
    if (top.empty()) return out;
    out.seed_max = top.front().ratio;
    out.value = out.seed_max;
    out.x_theta = top.front().x;
    out.y_theta = top.front().y;
    auto consider = [&](double r, double x, double y) {
      if (std::isfinite(r) && r > out.value) {
        out.value = r;
        out.x_theta = canonical_angle(x);
        out.y_theta = canonical_angle(y);
      }
    };

    // (ii) coordinate-wise golden-section refinement. Seed pairs within two
    // grid cells of an already refined seed lead to the same local maximum.
    std::vector<Pair> refined_seeds;
    for (const Pair& p : top) {
      const bool duplicate = std::any_of(refined_seeds.begin(), refined_seeds.end(), [&](const Pair& q) {
        return near(p.x, q.x, 2.0 * h) && near(p.y, q.y, 2.0 * h);
      });
      if (duplicate) continue;
      refined_seeds.push_back(p);
      const Pair refined = refine(p, h);
      consider(refined.ratio, refined.x, refined.y);
    }

    // (iii) Newton map from extreme-point pairs.
    if (options_.newton) {
      for (const Pair& p : newton_candidates(seed_values, h)) consider(p.ratio, p.x, p.y);
    }
    return out;
  }

 private:
  double eval(double theta) const { return f_(canonical_angle(theta)); }

  static bool near(double a, double b, double tol) {
    const double d = std::abs(canonical_angle(a) - canonical_angle(b));
    return std::min(d, kPi - d) <= tol;
  }

  double ratio_with(double fx, double x, double fy, double y) const {
    const double dist = std::abs(std::sin(x - y));
    if (dist < kDegeneratePairTol) return 0.0;
    return std::abs(fx - fy) / std::pow(dist, alpha_);
  }

  Pair refine(Pair p, double h) const {
    double fx = eval(p.x);
    double fy = eval(p.y);
    double best = ratio_with(fx, p.x, fy, p.y);
    // First sweep searches a full grid cell either side; later sweeps a
    // window sized by the previous move.
    double wx = h, wy = h;
    for (std::size_t round = 0; round < options_.max_rounds; ++round) {
      const double before = best;
      {
        const double fixed = fy, y = p.y;
        auto g = [&](double t) { return ratio_with(eval(t), t, fixed, y); };
        const auto [t, r] = detail::golden_max(g, p.x - wx, p.x + wx, options_.tolerance);
        wx = std::clamp(4.0 * std::abs(t - p.x), h / 64.0, h);
        if (r > best) {
          best = r;
          p.x = t;
          fx = eval(t);
        }
      }
      {
        const double fixed = fx, x = p.x;
        auto g = [&](double t) { return ratio_with(fixed, x, eval(t), t); };
        const auto [t, r] = detail::golden_max(g, p.y - wy, p.y + wy, options_.tolerance);
        wy = std::clamp(4.0 * std::abs(t - p.y), h / 64.0, h);
        if (r > best) {
          best = r;
          p.y = t;
          fy = eval(t);
        }
      }
      if (best - before <= 1e-14 * std::max(1.0, best)) break;
    }
    p.ratio = best;
    return p;
  }

  std::vector<Pair> newton_candidates(const std::vector<double>& seed_values, double h) const {
    const std::size_t g = seed_values.size();
    // Local extrema of the seed samples (cyclic), the most pronounced first,
    // polished by golden section.
    struct Extreme {
      std::size_t index;
      double sign;
    };
    std::vector<Extreme> raw;
    for (std::size_t i = 0; i < g; ++i) {
      const double prev = seed_values[(i + g - 1) % g];
      const double next = seed_values[(i + 1) % g];
      const double v = seed_values[i];
      if (v > prev && v >= next) raw.push_back({i, 1.0});
      if (v < prev && v <= next) raw.push_back({i, -1.0});
    }
    constexpr std::size_t kMaxExtremes = 32;
    if (raw.size() > kMaxExtremes) {
      const double mean = std::accumulate(seed_values.begin(), seed_values.end(), 0.0) / static_cast<double>(g);
      std::stable_sort(raw.begin(), raw.end(), [&](const Extreme& a, const Extreme& b) {
        return std::abs(seed_values[a.index] - mean) > std::abs(seed_values[b.index] - mean);
      });
      raw.resize(kMaxExtremes);
    }
    std::vector<std::pair<double, double>> extremes;  // (theta, value)
    for (const Extreme& e : raw) {
      const double theta = static_cast<double>(e.index) * h;
      auto s = [&](double t) { return e.sign * eval(t); };
      const auto [t, sv] = detail::golden_max(s, theta - h, theta + h, options_.tolerance);
      extremes.emplace_back(canonical_angle(t), e.sign * sv);
    }

    std::vector<Pair> pairs;
    for (std::size_t a = 0; a < extremes.size(); ++a) {
      for (std::size_t b = a + 1; b < extremes.size(); ++b) {
        const double r = ratio_with(extremes[a].second, extremes[a].first, extremes[b].second, extremes[b].first);
        // Newton works in the coordinate x > y.
        double x = extremes[a].first, y = extremes[b].first;
        if (x < y) std::swap(x, y);
        pairs.push_back({r, x, y});
      }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& p, const Pair& q) { return p.ratio > q.ratio; });
    if (pairs.size() > options_.newton_pairs) pairs.resize(options_.newton_pairs);

    std::vector<Pair> found;
    for (const Pair& start : pairs) {
      found.push_back(start);
      double x = start.x, y = start.y;
      for (std::size_t it = 0; it < options_.newton_iterations; ++it) {
        const double e = options_.fd_step;
        const double fx = eval(x), fy = eval(y);
        const double fxp = eval(x + e), fxm = eval(x - e);
        const double fyp = eval(y + e), fym = eval(y - e);
        const double d1x = (fxp - fxm) / (2.0 * e), d2x = (fxp - 2.0 * fx + fxm) / (e * e);
        const double d1y = (fyp - fym) / (2.0 * e), d2y = (fyp - 2.0 * fy + fym) / (e * e);
        const double slope = alpha_ * (fy - fx) / (y - x);
        const double x1 = x + (slope - d1x) / d2x;
        const double y1 = y + (slope - d1y) / d2y;
        if (!std::isfinite(x1) || !std::isfinite(y1)) break;
        if (std::abs(x1 - x) > 0.5 || std::abs(y1 - y) > 0.5 || !(x1 > y1)) break;
        const double moved = std::abs(x1 - x) + std::abs(y1 - y);
        x = x1;
        y = y1;
        found.push_back({ratio_with(eval(x), x, eval(y), y), x, y});
        if (moved < 1e-13) break;
      }
    }
    return found;
  }

  const std::function<double(double)>& f_;
  double alpha_;
  const HolderOptions& options_;
};

void check_holder_args(double alpha, const HolderOptions& options) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  if (options.seed_grid < 4) throw Error(ErrorCode::InvalidArgument, "seed grid needs at least 4 points");
}

}  // namespace

double phi_j(const Cocycle& c, std::size_t j, ProjPoint x) {
  return half_log_norm_sq(c.matrix(j), x.representative());
}

double psi_j(const Cocycle& c, std::size_t j, ProjPoint x) {
  return psi_from_images(c, j, images_at(c, x.theta()));
}

double transfer(const Cocycle& c, const std::function<double(ProjPoint)>& f, ProjPoint x) {
  const Vec2 v = x.representative();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    sum += c.prob(i) * f(ProjPoint::from_vector(c.matrix(i) * v));
  }
  return sum;
}

double l1_estimate(const Cocycle& c, const Discretization& d, const StationaryVector& nu) {
  const std::size_t n = d.mesh.size();
  if (nu.weights.size() != n) throw Error(ErrorCode::InvalidArgument, "stationary vector does not match the mesh");
  std::vector<double> terms(n, 0.0);
  parallel_for(n, [&](std::size_t v) {
    if (nu.weights[v] == 0.0) return;
    const auto images = images_at(c, d.mesh.thetas()[v]);
    double avg = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) avg += c.prob(j) * psi_from_images(c, j, images);
    terms[v] = avg * nu.weights[v];
  });
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

double l1_estimate_direct(const Cocycle& c, const Discretization& d, const StationaryVector& nu) {
  const std::size_t n = d.mesh.size();
  if (nu.weights.size() != n) throw Error(ErrorCode::InvalidArgument, "stationary vector does not match the mesh");
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (nu.weights[v] == 0.0) continue;
    const Vec2 x = d.mesh.point(v).representative();
    double avg = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) avg += c.prob(j) * half_log_norm_sq(c.matrix(j), x);
    total += avg * nu.weights[v];
  }
  return total;
}

double delta_alpha(const Cocycle& c, const Discretization& d, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  if (d.fmaps.size() != c.size()) throw Error(ErrorCode::InvalidArgument, "discretization does not match the cocycle");
  double best = 0.0;
  for (std::size_t v = 0; v < d.mesh.size(); ++v) {
    const Vec2 x = d.mesh.point(v).representative();
    double sum = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const ProjPoint image = ProjPoint::from_vector(c.matrix(j) * x);
      const double dist = proj_metric(image, d.mesh.point(d.fmaps[j][v]));
      if (dist > 0.0) sum += c.prob(j) * std::pow(dist, alpha);
    }
    best = std::max(best, sum);
  }
  return best;
}

HolderEstimate holder_estimate(const std::function<double(double)>& f, double alpha, const HolderOptions& options) {
  check_holder_args(alpha, options);
  const std::size_t g = options.seed_grid;
  std::vector<double> seed(g);
  for (std::size_t i = 0; i < g; ++i) seed[i] = f(static_cast<double>(i) * kPi / static_cast<double>(g));
  return HolderSearch(f, alpha, options).run(seed);
}

double holder_constant(const std::function<double(ProjPoint)>& f, double alpha, const HolderOptions& options) {
  const std::function<double(double)> on_theta = [&](double theta) { return f(ProjPoint(theta)); };
  return holder_estimate(on_theta, alpha, options).value;
}

double v_alpha_avg(const Cocycle& c, double alpha, const HolderOptions& options) {
  c.require_sl2();
  check_holder_args(alpha, options);
  const std::size_t g = options.seed_grid;
  const std::size_t k = c.size();

  // Unit images Phi_{A_i} x on the seed grid are shared by every psi_j.
  std::vector<std::vector<Vec2>> images(g);
  parallel_for(g, [&](std::size_t s) {
    images[s] = images_at(c, static_cast<double>(s) * kPi / static_cast<double>(g));
  });

  std::vector<double> constants(k);
  parallel_for(k, [&](std::size_t j) {
    std::vector<double> seed(g);
    for (std::size_t s = 0; s < g; ++s) seed[s] = psi_from_images(c, j, images[s]);
    const std::function<double(double)> psi = [&](double theta) {
      const Vec2 x{std::cos(theta), std::sin(theta)};
      const Matrix2& a = c.matrix(j);
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += c.prob(i) * half_log_norm_sq(a, unit_image(c.matrix(i), x));
      return sum;
    };
    constants[j] = HolderSearch(psi, alpha, options).run(seed).value;
  });

  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) total += c.prob(j) * constants[j];
  return total;
}

StationaryResult solve_stationary(const Cocycle& c, const Mesh& mesh) {
  Discretization d = discretize(c, mesh);
  StationaryVector nu = stationary(d);
  const double l1 = l1_estimate(c, d, nu);
  return {std::move(d), std::move(nu), l1};
}

AlphaSelection resolve_alpha_n(const Cocycle& base, const EstimateParams& params) {
  base.require_sl2();
  const std::vector<double> grid = params.alpha ? std::vector<double>{*params.alpha} : params.alpha_grid;
  if (!params.n) return select_alpha_n(base, grid, params.n_max, params.word_cap, params.kappa);

  const int n = *params.n;
  const Cocycle iterated = iterate_cocycle(base, n, params.word_cap);
  std::optional<AlphaSelection> pick;
  double closest = INFINITY;
  for (double alpha : grid) {
    const KappaCertificate cert = kappa_alpha(iterated, alpha, params.kappa, n);
    closest = std::min(closest, cert.kappa_upper);
    if (cert.kappa_upper < 1.0 && (!pick || cert.kappa_upper < pick->certificate.kappa_upper)) {
      pick = AlphaSelection{alpha, n, cert};
    }
  }
  if (!pick) {
    std::ostringstream os;
    os << "kappa_upper = " << closest << " >= 1 at n = " << n;
    throw Error(ErrorCode::NoContraction, os.str());
  }
  return *pick;
}

EstimateReport full_estimate(const Cocycle& base, const EstimateParams& params) {
  const AlphaSelection selection = resolve_alpha_n(base, params);
  const Cocycle iterated = iterate_cocycle(base, selection.n, params.word_cap);
  const Mesh mesh = params.mesh_points.empty() ? Mesh::uniform(params.mesh_size) : Mesh(params.mesh_points);
  const StationaryResult st = solve_stationary(iterated, mesh);

  EstimateReport report;
  report.alpha = selection.alpha;
  report.n = selection.n;
  report.kappa = selection.certificate.kappa_refined;
  report.kappa_upper = selection.certificate.kappa_upper;
  report.mesh_size = mesh.size();
  report.word_count = iterated.size();
  report.delta_alpha = delta_alpha(iterated, st.discretization, selection.alpha);
  report.v_alpha_avg = v_alpha_avg(iterated, selection.alpha, params.holder);
  report.l1_estimate = st.l1;
  report.l1_per_step = st.l1 / static_cast<double>(selection.n);
  report.error_bound = report.delta_alpha * report.v_alpha_avg / (1.0 - report.kappa_upper);
  report.stationary_residual = st.nu.residual;
  if (params.mc) report.mc_crosscheck = mc_l1(base, *params.mc);
  return report;
}

}  // namespace lyapdisc
