#include <gtest/gtest.h>

#include <cmath>

#include "kfront/errors.hpp"
#include "kfront/velocity_space.hpp"

using namespace kfront;

TEST(VelocityGrid, RejectsTooFewNodes) {
  EXPECT_THROW(make_grid(1.0, 2), ConfigError);
  EXPECT_THROW(make_grid(0.0, 10), ConfigError);
  EXPECT_THROW(make_grid(-1.0, 10), ConfigError);
}

TEST(VelocityGrid, MidpointFourNodes) {
  const auto g = make_grid(1.0, 4);
  const double expected[] = {-0.75, -0.25, 0.25, 0.75};
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(g.nodes[i], expected[i]);
    EXPECT_DOUBLE_EQ(g.weights[i], 0.5);
  }
}

TEST(VelocityGrid, WeightsSumToMeasure) {
  EXPECT_NEAR(make_grid(2.0, 400).weights.sum(), 4.0, 1e-12);
  EXPECT_NEAR(make_grid(2.0, 400, QuadratureRule::GaussLegendre).weights.sum(), 4.0, 1e-12);
  EXPECT_NEAR(make_grid(1.0, 401, QuadratureRule::GaussLegendre).weights.sum(), 2.0, 1e-12);
}

TEST(VelocityGrid, NodesAreMirrorSymmetricAndIncreasing) {
  for (auto rule : {QuadratureRule::Midpoint, QuadratureRule::GaussLegendre}) {
    for (int n : {3, 4, 33, 400, 401}) {
      const auto g = make_grid(1.7, n, rule);
      for (int i = 0; i < n; ++i) {
        EXPECT_LE(std::abs(g.nodes[i] + g.nodes[n - 1 - i]), 1e-14);
        EXPECT_GT(g.weights[i], 0.0);
        if (i + 1 < n) EXPECT_LT(g.nodes[i], g.nodes[i + 1]);
      }
    }
  }
}

TEST(VelocityGrid, GaussLegendreIsExactForHighDegree) {
  const auto g = make_grid(1.0, 8, QuadratureRule::GaussLegendre);
  const Eigen::VectorXd v14 = g.nodes.array().pow(14);
  EXPECT_NEAR(integrate(g, v14), 2.0 / 15.0, 1e-14);
}

TEST(Equilibrium, UniformValues) {
  const auto e1 = uniform_equilibrium(make_grid(1.0, 10));
  const auto e2 = uniform_equilibrium(make_grid(2.0, 10));
  EXPECT_TRUE((e1.values.array() == 0.5).all());
  EXPECT_TRUE((e2.values.array() == 0.25).all());
}

TEST(Equilibrium, MomentsOfUniform) {
  for (auto rule : {QuadratureRule::Midpoint, QuadratureRule::GaussLegendre}) {
    const auto g = make_grid(1.3, 57, rule);
    const auto m = uniform_equilibrium(g);
    EXPECT_NEAR(integrate(g, m.values), 1.0, 1e-12);
    EXPECT_NEAR(integrate(g, g.nodes.cwiseProduct(m.values)), 0.0, 1e-12);
  }
}

TEST(Equilibrium, NormalizedGeneralDensity) {
  const auto g = make_grid(1.0, 101);
  const auto m = normalized_equilibrium(g, [](double v) { return std::exp(-v * v); });
  EXPECT_NEAR(integrate(g, m.values), 1.0, 1e-12);
  EXPECT_NEAR(integrate(g, g.nodes.cwiseProduct(m.values)), 0.0, 1e-12);
  EXPECT_THROW(normalized_equilibrium(g, [](double) { return -1.0; }), ConfigError);
}

TEST(Integrate, ConstantAndOddIntegrands) {
  const auto g = make_grid(1.0, 400);
  EXPECT_NEAR(integrate(g, Eigen::VectorXd::Ones(400)), 2.0, 1e-13);
  EXPECT_NEAR(integrate(g, g.nodes), 0.0, 1e-14);
  const Eigen::VectorXd odd = g.nodes.array().sin() * g.nodes.array().square().exp();
  EXPECT_NEAR(integrate(g, odd), 0.0, 1e-14);
}

TEST(Integrate, SecondMomentWithinMidpointBound) {
  const auto g = make_grid(1.0, 400);
  EXPECT_NEAR(integrate(g, g.nodes.cwiseAbs2()), 2.0 / 3.0, 1e-4);
}

TEST(Integrate, MidpointIsSecondOrder) {
  auto error = [](int n, auto fn, double exact) {
    const auto g = make_grid(1.0, n);
    return std::abs(integrate(g, g.nodes.unaryExpr(fn)) - exact);
  };
  auto sq = [](double v) { return v * v; };
  auto cs = [](double v) { return std::cos(v); };
  const double sq_ratio = error(50, sq, 2.0 / 3.0) / error(100, sq, 2.0 / 3.0);
  const double cs_ratio = error(50, cs, 2.0 * std::sin(1.0)) / error(100, cs, 2.0 * std::sin(1.0));
  EXPECT_NEAR(sq_ratio, 4.0, 0.05);
  EXPECT_NEAR(cs_ratio, 4.0, 0.05);
}

TEST(Integrate, LengthMismatchThrows) {
  const auto g = make_grid(1.0, 10);
  EXPECT_THROW(integrate(g, Eigen::VectorXd::Ones(9)), std::invalid_argument);
}
