#include "lyapdisc/discretizer.hpp"
#include "lyapdisc/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

namespace lyapdisc {
namespace {

using Columns = std::vector<std::vector<StochasticMatrix::Entry>>;

std::size_t brute_nearest(const Mesh& mesh, ProjPoint x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < mesh.size(); ++i) {
    if (proj_metric(mesh.point(i), x) < proj_metric(mesh.point(best), x)) best = i;
  }
  return best;
}

TEST(Mesh, UniformPoints) {
  const Mesh two = Mesh::uniform(2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two.thetas()[0], 0.0);
  EXPECT_NEAR(two.thetas()[1], kPi / 2, 1e-15);
  const Mesh four = Mesh::uniform(4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(four.thetas()[i], i * kPi / 4, 1e-15);
  const Mesh big = Mesh::uniform(1000);
  EXPECT_NEAR(proj_metric(big.point(0), big.point(1)), std::sin(kPi / 1000), 1e-15);
  EXPECT_THROW(Mesh::uniform(1), Error);
}

TEST(Mesh, ExplicitMeshIsValidated) {
  EXPECT_NO_THROW(Mesh({0.0, 0.5, 2.0}));
  EXPECT_THROW(Mesh({0.5, 0.5, 2.0}), Error);
  EXPECT_THROW(Mesh({0.5, 0.2}), Error);
  EXPECT_THROW(Mesh({0.0, kPi}), Error);
  EXPECT_THROW(Mesh({0.3}), Error);
}

TEST(Nearest, Examples) {
  const Mesh m = Mesh::uniform(4);
  EXPECT_EQ(nearest(m, ProjPoint(0.01)), 0u);
  EXPECT_EQ(nearest(m, ProjPoint(kPi / 8)), 0u);
  EXPECT_EQ(nearest(m, ProjPoint(3.1)), 0u);
}

TEST(Nearest, MatchesBruteForce) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, kPi);
  std::vector<double> pts;
  for (int i = 0; i < 37; ++i) pts.push_back(u(rng));
  std::sort(pts.begin(), pts.end());
  const Mesh irregular(pts);
  for (const Mesh& m : {Mesh::uniform(7), Mesh::uniform(1000), irregular}) {
    for (int i = 0; i < 5000; ++i) {
      const ProjPoint x(u(rng));
      EXPECT_EQ(m.nearest(x), brute_nearest(m, x));
    }
  }
}

TEST(Discretize, IdentityGivesIdentityMatrix) {
  const Discretization d = discretize(Cocycle::uniform({Matrix2::identity()}), Mesh::uniform(9));
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(d.fmaps[0][i], i);
    EXPECT_EQ(d.pmatrix.at(i, i), 1.0);
  }
  EXPECT_EQ(d.pmatrix.nonzeros(), 9u);
}

TEST(Discretize, QuarterTurnIsPermutation) {
  const Discretization d = discretize(Cocycle::uniform({rotation(kPi / 2)}), Mesh::uniform(4));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(d.fmaps[0][i], (i + 2) % 4);
  for (std::size_t r = 0; r < 4; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < 4; ++c) row += d.pmatrix.at(r, c);
    EXPECT_EQ(row, 1.0);
  }
}

TEST(Discretize, FirstExampleShape) {
  const Cocycle c = iterate_cocycle(testing::example1_base(), 3);
  const Discretization d = discretize(c, Mesh::uniform(1000));
  EXPECT_EQ(d.fmaps.size(), 512u);
  for (std::size_t v = 0; v < 1000; ++v) {
    std::size_t count = 0;
    d.pmatrix.for_each_in_column(v, [&](std::size_t, double) { ++count; });
    EXPECT_LE(count, 512u);
  }
}

TEST(Discretize, ColumnsSumToOne) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Cocycle c = testing::random_sl2_cocycle(rng, 5);
    const Discretization d = discretize(c, Mesh::uniform(100 + trial));
    for (std::size_t v = 0; v < d.mesh.size(); ++v) EXPECT_NEAR(d.pmatrix.column_sum(v), 1.0, 1e-14);
  }
}

TEST(Discretize, MatrixRebuildsFromMaps) {
  const Cocycle c = iterate_cocycle(testing::example3_base(), 3);
  const Discretization d = discretize(c, Mesh::uniform(50));
  const StochasticMatrix rebuilt = assemble_pmatrix(d.fmaps, c.probs(), 50);
  for (std::size_t r = 0; r < 50; ++r) {
    for (std::size_t v = 0; v < 50; ++v) {
      double expected = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (d.fmaps[j][v] == r) expected += c.prob(j);
      }
      EXPECT_NEAR(d.pmatrix.at(r, v), expected, 1e-15);
      EXPECT_EQ(rebuilt.at(r, v), d.pmatrix.at(r, v));
    }
  }
}

TEST(Discretize, DisplacementAtMostHalfCell) {
  const Cocycle c = iterate_cocycle(testing::example2_base(), 5);
  for (std::size_t n : {64u, 257u}) {
    const Mesh mesh = Mesh::uniform(n);
    const Discretization d = discretize(c, mesh);
    for (std::size_t j = 0; j < c.size(); ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const ProjPoint image = proj_action(c.matrix(j), mesh.point(i));
        EXPECT_LE(proj_metric(image, mesh.point(d.fmaps[j][i])), std::sin(kPi / (2.0 * n)) + 1e-15);
      }
    }
  }
}

TEST(Discretize, PermutationCaseIsDoublyStochastic) {
  const Cocycle c = Cocycle::uniform({rotation(kPi / 6), rotation(kPi / 2), rotation(5 * kPi / 6)});
  const Discretization d = discretize(c, Mesh::uniform(12));
  for (std::size_t r = 0; r < 12; ++r) {
    double row = 0.0;
    for (std::size_t v = 0; v < 12; ++v) row += d.pmatrix.at(r, v);
    EXPECT_NEAR(row, 1.0, 1e-14);
  }
}

TEST(Mixing, IdentityHasOneClassPerState) {
  const auto report = check_mixing(discretize(Cocycle::uniform({Matrix2::identity()}), Mesh::uniform(4)));
  EXPECT_FALSE(report.mixing);
  EXPECT_EQ(report.closed_classes, 4u);
}

TEST(Mixing, QuarterTurnSplitsIntoTwoPeriodicClasses) {
  // 0 -> 2 -> 0 and 1 -> 3 -> 1.
  const auto report = check_mixing(discretize(Cocycle::uniform({rotation(kPi / 2)}), Mesh::uniform(4)));
  EXPECT_FALSE(report.mixing);
  EXPECT_EQ(report.closed_classes, 2u);
}

TEST(Mixing, EighthTurnIsOneClassOfPeriodFour) {
  const auto report = check_mixing(discretize(Cocycle::uniform({rotation(kPi / 4)}), Mesh::uniform(4)));
  EXPECT_FALSE(report.mixing);
  EXPECT_EQ(report.closed_classes, 1u);
  EXPECT_EQ(report.period, 4u);
}

TEST(Mixing, PositiveMatrixMixes) {
  Columns cols(3);
  for (std::size_t v = 0; v < 3; ++v) cols[v] = {{0, 0.2}, {1, 0.3}, {2, 0.5}};
  const auto report = check_mixing(StochasticMatrix(cols));
  EXPECT_TRUE(report.mixing);
  EXPECT_EQ(report.period, 1u);
}

TEST(Mixing, TransientStatesAreAllowed) {
  // State 2 feeds the aperiodic class {0, 1} and is never re-entered.
  Columns cols{{{0, 0.5}, {1, 0.5}}, {{0, 1.0}}, {{0, 0.5}, {2, 0.5}}};
  const auto report = check_mixing(StochasticMatrix(cols));
  EXPECT_TRUE(report.mixing);
  EXPECT_EQ(report.components, 2u);
}

TEST(StochasticMatrix, RejectsBadColumns) {
  EXPECT_THROW(StochasticMatrix(Columns{{{0, 0.5}}}), Error);
  EXPECT_THROW(StochasticMatrix(Columns{{{0, 1.5}, {0, -0.5}}}), Error);
}

TEST(Stationary, RankOneChain) {
  const std::vector<double> q{0.1, 0.6, 0.3};
  Columns cols(3);
  for (std::size_t v = 0; v < 3; ++v) cols[v] = {{0, q[0]}, {1, q[1]}, {2, q[2]}};
  const auto nu = stationary(StochasticMatrix(cols));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(nu.weights[i], q[i], 1e-14);
}

TEST(Stationary, TwoStateChain) {
  const auto nu = stationary(StochasticMatrix(Columns{{{0, 0.9}, {1, 0.1}}, {{0, 0.2}, {1, 0.8}}}));
  EXPECT_NEAR(nu.weights[0], 2.0 / 3.0, 1e-13);
  EXPECT_NEAR(nu.weights[1], 1.0 / 3.0, 1e-13);
  EXPECT_LT(nu.residual, 1e-12);
}

// D_2 attracts every direction except e2 towards e1 (theta = 0). An odd mesh
// leaves e2 out, so index 0 is the only closed class.
TEST(Stationary, ContractingMatrixConcentratesAtAttractor) {
  const auto d = discretize(Cocycle::uniform({make_generator(GeneratorSpec::d(2.0))}), Mesh::uniform(63));
  const auto nu = stationary(d);
  EXPECT_EQ(nu.weights[0], 1.0);
  EXPECT_LT(nu.residual, 1e-12);
}

TEST(Stationary, EvenMeshKeepsRepellerAndFailsMixing) {
  const auto d = discretize(Cocycle::uniform({make_generator(GeneratorSpec::d(2.0))}), Mesh::uniform(64));
  try {
    stationary(d);
    FAIL() << "expected NotMixing";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotMixing);
  }
}

TEST(Stationary, ExamplesSatisfyInvariants) {
  const std::vector<std::pair<Cocycle, std::size_t>> cases{
      {iterate_cocycle(testing::example1_base(), 3), 1000},
      {iterate_cocycle(testing::example2_base(), 9), 512},
      {iterate_cocycle(testing::example3_base(), 9), 512}};
  for (const auto& [c, n] : cases) {
    const Discretization d = discretize(c, Mesh::uniform(n));
    EXPECT_TRUE(check_mixing(d).mixing);
    const auto nu = stationary(d);
    EXPECT_LT(nu.residual, 1e-12);
    EXPECT_NEAR(stationary_residual(d.pmatrix, nu.weights), nu.residual, 1e-15);
    double sum = 0.0;
    for (double w : nu.weights) {
      EXPECT_GE(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace lyapdisc
