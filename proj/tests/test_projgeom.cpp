#include "lyapdisc/error.hpp"
#include "lyapdisc/projgeom.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace lyapdisc {
namespace {

using testing::random_sl2;
using testing::wedge_metric;

TEST(ProjPoint, CanonicalAngleStaysInHalfOpenInterval) {
  for (double t : {-10.0, -kPi, -0.0, 0.0, kPi, 2.0 * kPi + 0.1, 1e6}) {
    const ProjPoint p(t);
    EXPECT_GE(p.theta(), 0.0) << t;
    EXPECT_LT(p.theta(), kPi) << t;
  }
  EXPECT_NEAR(ProjPoint(kPi + 0.3).theta(), 0.3, 1e-15);
  EXPECT_FALSE(std::signbit(ProjPoint(-0.0).theta()));
}

TEST(ProjPoint, RepresentativeIsUnit) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) EXPECT_NEAR(ProjPoint(u(rng)).representative().norm(), 1.0, 1e-14);
}

TEST(ProjPoint, FromVectorIgnoresSign) {
  EXPECT_NEAR(ProjPoint::from_vector({-1.0, -1.0}).theta(), kPi / 4, 1e-15);
  EXPECT_NEAR(ProjPoint::from_vector({1.0, -1.0}).theta(), 3 * kPi / 4, 1e-15);
}

TEST(ProjMetric, Examples) {
  EXPECT_EQ(proj_metric(ProjPoint(0.3), ProjPoint(0.3)), 0.0);
  EXPECT_NEAR(proj_metric(ProjPoint(0.0), ProjPoint(kPi / 2)), 1.0, 1e-15);
  EXPECT_NEAR(proj_metric(ProjPoint(0.0), ProjPoint(kPi / 4)), std::sqrt(0.5), 1e-15);
}

TEST(ProjMetric, AgreesWithWedgeForm) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    EXPECT_NEAR(proj_metric(ProjPoint(a), ProjPoint(b)), wedge_metric(a, b), 1e-14);
  }
}

TEST(ProjMetric, MetricAxiomsOnRandomTriples) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int i = 0; i < 10000; ++i) {
    const ProjPoint x(u(rng)), y(u(rng)), z(u(rng));
    EXPECT_EQ(proj_metric(x, y), proj_metric(y, x));
    EXPECT_EQ(proj_metric(x, x), 0.0);
    EXPECT_LE(proj_metric(x, z), proj_metric(x, y) + proj_metric(y, z) + 1e-15);
    if (x != y) EXPECT_GT(proj_metric(x, y), 0.0);
  }
}

TEST(Matrix2, DeterminantAndSingularValues) {
  const Matrix2 s(2.2, -1.0, 1.0, 0.0);
  EXPECT_NEAR(s.det(), 1.0, 1e-15);
  EXPECT_TRUE(s.is_sl2());
  const auto [s1, s2] = Matrix2(3.5, 0.0, 0.0, 1.0 / 3.5).singular_values();
  EXPECT_NEAR(s1, 3.5, 1e-14);
  EXPECT_NEAR(s2, 1.0 / 3.5, 1e-15);
  EXPECT_FALSE(Matrix2(1.0, 2.0, 2.0, 4.0).is_invertible());
}

TEST(Matrix2, LeastExpandingDirectionMinimisesNorm) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const Matrix2 m = random_sl2(rng, 5.0);
    const double s2 = m.singular_values().second;
    const Vec2 v = m.least_expanding_direction().representative();
    EXPECT_NEAR((m * v).norm(), s2, 1e-9 * std::max(1.0, m.operator_norm()));
  }
  EXPECT_NEAR(Matrix2(2.0, 0.0, 0.0, 0.5).least_expanding_direction().theta(), kPi / 2, 1e-15);
}

TEST(ProjAction, Examples) {
  EXPECT_NEAR(proj_action(rotation(kPi / 2), ProjPoint(0.0)).theta(), kPi / 2, 1e-15);
  EXPECT_NEAR(proj_action(Matrix2::identity(), ProjPoint(1.1)).theta(), 1.1, 1e-15);
  EXPECT_EQ(proj_action(Matrix2(2.0, 0.0, 0.0, 0.5), ProjPoint(0.0)).theta(), 0.0);
}

TEST(ProjAction, RejectsSingularMatrix) {
  try {
    proj_action(Matrix2(1.0, 1.0, 1.0, 1.0), ProjPoint(0.2));
    FAIL() << "expected NonInvertible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonInvertible);
  }
}

TEST(ProjAction, IsEquivariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int i = 0; i < 1000; ++i) {
    const Matrix2 a = random_sl2(rng), b = random_sl2(rng);
    const ProjPoint x(u(rng));
    const double lhs = proj_action(a * b, x).theta();
    const double rhs = proj_action(a, proj_action(b, x)).theta();
    EXPECT_LT(proj_metric(ProjPoint(lhs), ProjPoint(rhs)), 1e-12);
  }
}

TEST(DphiNorm, Examples) {
  EXPECT_NEAR(dphi_norm_sl2(Matrix2::identity(), ProjPoint(0.7)), 1.0, 1e-15);
  EXPECT_NEAR(dphi_norm_sl2(rotation(0.4), ProjPoint(2.1)), 1.0, 1e-15);
  EXPECT_NEAR(dphi_norm_sl2(Matrix2(2.2, 0.0, 0.0, 1.0 / 2.2), ProjPoint(0.0)), 1.0 / 4.84, 1e-15);
  try {
    dphi_norm_sl2(Matrix2(2.0, 0.0, 0.0, 2.0), ProjPoint(0.0));
    FAIL() << "expected NotSl2";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSl2);
  }
}

TEST(DphiNorm, BoundFormExamples) {
  EXPECT_NEAR(dphi_norm_bound(Matrix2::identity(), ProjPoint(0.3)), 1.0, 1e-15);
  EXPECT_NEAR(dphi_norm_bound(Matrix2(2.2, 0.0, 0.0, 1.0 / 2.2), ProjPoint(0.0)), 1.0 / 4.84, 1e-15);
  EXPECT_NEAR(dphi_norm_bound(Matrix2(2.0, 0.0, 0.0, 2.0), ProjPoint(1.3)), 1.0, 1e-15);
}

TEST(DphiNorm, GeneralDimensionMatchesPlaneForm) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int i = 0; i < 200; ++i) {
    const Matrix2 m = random_sl2(rng);
    const double t = u(rng);
    Eigen::MatrixXd a(2, 2);
    a << m.a(), m.b(), m.c(), m.d();
    Eigen::VectorXd v(2);
    v << std::cos(t), std::sin(t);
    EXPECT_NEAR(dphi_norm_bound(a, ProjPointN(v)), dphi_norm_sl2(m, ProjPoint(t)), 1e-12);
  }
  Eigen::MatrixXd twice = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2, 0);
  EXPECT_NEAR(dphi_norm_bound(twice, ProjPointN(e1)), 1.0, 1e-15);
}

TEST(DphiNorm, GeneralDimensionThreeByThree) {
  // diag(3, 2, 1/6): |wedge_2 A| = 6, and |A e1|^2 = 9.
  Eigen::MatrixXd a = Eigen::Vector3d(3.0, 2.0, 1.0 / 6.0).asDiagonal();
  EXPECT_NEAR(dphi_norm_bound(a, ProjPointN(Eigen::VectorXd::Unit(3, 0))), 6.0 / 9.0, 1e-14);
  const ProjPointN x(Eigen::Vector3d(1.0, 0.0, 0.0)), y(Eigen::Vector3d(0.0, 1.0, 0.0));
  EXPECT_NEAR(proj_metric(x, y), 1.0, 1e-15);
  EXPECT_NEAR(proj_metric(x, ProjPointN(Eigen::Vector3d(-2.0, 0.0, 0.0))), 0.0, 1e-15);
}

TEST(IncrementRatio, Examples) {
  EXPECT_NEAR(increment_ratio(Matrix2::identity(), ProjPoint(0.2), ProjPoint(0.9), 0.5), 1.0, 1e-14);
  EXPECT_NEAR(increment_ratio(rotation(1.3), ProjPoint(0.2), ProjPoint(2.9), 0.7), 1.0, 1e-14);
  // D_2 on (pi/4, pi/2): |A x ^ A y| / (|A x| |A y| delta(x, y)) = 1 / (|A x| |A y|) for unit x, y.
  const double ax = std::sqrt((4.0 + 0.25) / 2.0), ay = 0.5;
  EXPECT_NEAR(increment_ratio(Matrix2(2.0, 0.0, 0.0, 0.5), ProjPoint(kPi / 4), ProjPoint(kPi / 2), 1.0),
              1.0 / (ax * ay), 1e-14);
}

TEST(IncrementRatio, RejectsDegeneratePairAndBadAlpha) {
  const Matrix2 m(2.0, 0.0, 0.0, 0.5);
  try {
    increment_ratio(m, ProjPoint(0.5), ProjPoint(0.5), 0.5);
    FAIL() << "expected DegeneratePair";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegeneratePair);
  }
  EXPECT_THROW(increment_ratio(m, ProjPoint(0.1), ProjPoint(0.5), 0.0), Error);
  EXPECT_THROW(increment_ratio(m, ProjPoint(0.1), ProjPoint(0.5), 1.5), Error);
}

TEST(IncrementRatio, ApproachesDerivativeNorm) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int i = 0; i < 100; ++i) {
    const Matrix2 m = random_sl2(rng);
    const ProjPoint x(u(rng));
    const double target = dphi_norm_sl2(m, x);
    double previous = INFINITY;
    for (double h : {1e-4, 1e-5, 1e-6}) {
      const double err = std::abs(increment_ratio(m, x, ProjPoint(x.theta() + h), 1.0) - target);
      EXPECT_LE(err, previous + 1e-9);
      previous = err;
    }
    EXPECT_LT(previous, 1e-3 * std::max(1.0, target));
  }
}

TEST(IncrementRatio, BoundedByAverageOfDerivativeNorms) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, kPi);
  std::uniform_real_distribution<double> ua(0.01, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const Matrix2 m = random_sl2(rng, 10.0);
    const ProjPoint x(u(rng)), y(u(rng));
    if (proj_metric(x, y) < 1e-10) continue;
    const double alpha = ua(rng);
    const double lhs = increment_ratio(m, x, y, alpha);
    const double rhs = 0.5 * (std::pow(dphi_norm_sl2(m, x), alpha) + std::pow(dphi_norm_sl2(m, y), alpha));
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

}  // namespace
}  // namespace lyapdisc
