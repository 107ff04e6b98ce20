#pragma once

// Example cocycles and independent reference computations shared by tests.

#include "lyapdisc/cocycle.hpp"
#include "lyapdisc/projgeom.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace lyapdisc::testing {

inline Cocycle example1_base() {
  std::vector<Matrix2> mats;
  for (int j = 1; j <= 8; ++j) {
    const double t = j * kPi / 8.0;
    mats.push_back(rotation(-t) * make_generator(GeneratorSpec::d(2.2)) * rotation(t));
  }
  return Cocycle::uniform(mats);
}

inline Cocycle example2_base() {
  return Cocycle::uniform({make_generator(GeneratorSpec::s(8.0)), make_generator(GeneratorSpec::s(1.9))});
}

inline Cocycle example3_base() {
  return Cocycle::uniform({make_generator(GeneratorSpec::d(3.5)), make_generator(GeneratorSpec::r(0.4))});
}

// Random SL(2, R) matrix from entries uniform in [-bound, bound], rescaled
// to determinant one.
inline Matrix2 random_sl2(std::mt19937_64& rng, double bound = 3.0) {
  std::uniform_real_distribution<double> u(-bound, bound);
  for (;;) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    double det = a * d - b * c;
    if (std::abs(det) < 0.05) continue;
    if (det < 0) {
      b = -b;
      d = -d;
      det = -det;
    }
    const double s = 1.0 / std::sqrt(det);
    return {a * s, b * s, c * s, d * s};
  }
}

inline Cocycle random_sl2_cocycle(std::mt19937_64& rng, std::size_t k, double bound = 3.0) {
  std::vector<Matrix2> mats;
  std::vector<double> w(k);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    mats.push_back(random_sl2(rng, bound));
    w[j] = u(rng);
    total += w[j];
  }
  for (double& x : w) x /= total;
  // Absorb rounding so the weights sum to one.
  double head = 0.0;
  for (std::size_t j = 0; j + 1 < k; ++j) head += w[j];
  w[k - 1] = 1.0 - head;
  return Cocycle(mats, w);
}

// |x ^ y| / (|x| |y|) straight from the vectors.
inline double wedge_metric(double tx, double ty) {
  const double x0 = std::cos(tx), x1 = std::sin(tx);
  const double y0 = std::cos(ty), y1 = std::sin(ty);
  return std::abs(x0 * y1 - x1 * y0);
}

// H_alpha from the expanded products, without any shared code path.
inline double h_alpha_direct(const Cocycle& c, double alpha, double theta) {
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const Matrix2& m = c.matrix(j);
    const double x = m.a() * std::cos(theta) + m.b() * std::sin(theta);
    const double y = m.c() * std::cos(theta) + m.d() * std::sin(theta);
    sum += c.prob(j) * std::pow(x * x + y * y, -alpha);
  }
  return sum;
}

}  // namespace lyapdisc::testing
