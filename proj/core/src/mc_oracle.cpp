#include "lyapdisc/mc_oracle.hpp"

#include "lyapdisc/error.hpp"
#include "lyapdisc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace lyapdisc {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double run_sample(const Cocycle& c, const std::vector<double>& cumulative, const McOptions& options,
                  std::uint64_t sample) {
  std::mt19937_64 rng(options.seed + sample);
  auto draw = [&]() -> std::size_t {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), c.size() - 1);
  };

  Vec2 v{std::cos(options.start_theta), std::sin(options.start_theta)};
  auto step = [&]() {
    const Vec2 w = c.matrix(draw()) * v;
    const double n = w.norm();
    v = {w.x / n, w.y / n};
    return std::log(n);
  };
  for (std::uint64_t i = 0; i < options.burn_in; ++i) step();
  CompensatedSum acc;
  for (std::uint64_t i = 0; i < options.steps; ++i) acc.add(step());
  return acc.value() / static_cast<double>(options.steps);
}

}  // namespace

McEstimate mc_l1(const Cocycle& c, std::uint64_t steps, std::uint64_t samples, std::uint64_t seed) {
  McOptions options;
  options.steps = steps;
  options.samples = samples;
  options.seed = seed;
  return mc_l1(c, options);
}

McEstimate mc_l1(const Cocycle& c, const McOptions& options) {
  if (options.steps < 1 || options.samples < 1) {
    throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs steps >= 1 and samples >= 1");
  }
  std::vector<double> cumulative(c.size());
  double running = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    running += c.prob(j);
    cumulative[j] = running;
  }

  std::vector<double> results(options.samples);
  parallel_for(options.samples, [&](std::size_t s) { results[s] = run_sample(c, cumulative, options, s); });

  CompensatedSum total;
  for (double r : results) total.add(r);
  const double n = static_cast<double>(options.samples);
  const double mean = total.value() / n;
  double var = 0.0;
  for (double r : results) var += (r - mean) * (r - mean);

  McEstimate out;
  out.mean = mean;
  out.std_error = options.samples > 1 ? std::sqrt(var / (n - 1.0)) / std::sqrt(n) : 0.0;
  out.steps_per_sample = options.steps;
  out.samples = options.samples;
  out.seed = options.seed;
  out.burn_in = options.burn_in;
  out.start_theta = options.start_theta;
  return out;
}

}  // namespace lyapdisc
