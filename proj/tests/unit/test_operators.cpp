#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "kfront/errors.hpp"
#include "kfront/operators.hpp"

using namespace kfront;

namespace {

double gauss_similarity(double a, double b) { return std::exp(-(a - b) * (a - b)) + 0.5; }

double max_weighted_column_sum(const DiscreteOperator& op) {
  return (op.grid.weights.transpose() * op.matrix_l).cwiseAbs().maxCoeff();
}

double min_offdiagonal(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd b = a;
  b.diagonal().setConstant(1.0);
  return b.minCoeff();
}

struct Fixture {
  VelocityGrid grid = make_grid(1.0, 40);
  Equilibrium m = uniform_equilibrium(grid);
};

}  // namespace

TEST(Bgk, EquilibriumIsInKernel) {
  Fixture fx;
  const auto op = build_bgk(fx.grid, fx.m, 1.0);
  EXPECT_LE((op.matrix_l * fx.m.values).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE(apply_ext(op, fx.m.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Bgk, MassConservingColumns) {
  Fixture fx;
  EXPECT_LE(max_weighted_column_sum(build_bgk(fx.grid, fx.m, 0.3)), 1e-14);
}

TEST(Bgk, NoGrowthMeansExtEqualsL) {
  Fixture fx;
  const auto op = build_bgk(fx.grid, fx.m, 0.0);
  EXPECT_EQ((op.matrix_ext - op.matrix_l).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE((op.sigma.array() == 1.0).all());
}

TEST(Bgk, IndicatorMatchesHandExpansion) {
  Fixture fx;
  const double r = 1.0;
  const auto op = build_bgk(fx.grid, fx.m, r);
  const int k = 7;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(40);
  f[k] = 1.0;
  const Eigen::VectorXd out = apply_ext(op, f);
  for (int i = 0; i < 40; ++i) {
    // L f = M rho - f and r (M rho - f) with rho = w_k
    const double expected = (1.0 + r) * (fx.m.values[i] * fx.grid.weights[k] - (i == k ? 1.0 : 0.0));
    EXPECT_NEAR(out[i], expected, 1e-15);
  }
  EXPECT_EQ(apply_ext(op, Eigen::VectorXd::Zero(40)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(apply_ext(op, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Kernel, BgkAsKernelReproducesBgkExtension) {
  Fixture fx;
  const double r = 1.0;
  const Eigen::MatrixXd k = (1.0 + r) * fx.m.values * Eigen::RowVectorXd::Ones(40);
  const auto as_kernel = build_kernel(fx.grid, k, 0.0, fx.m);
  const auto bgk = build_bgk(fx.grid, fx.m, r);
  EXPECT_LE((as_kernel.matrix_ext - bgk.matrix_ext).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((as_kernel.sigma - bgk.sigma).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Kernel, ConstantKernelBalancesUniformEquilibrium) {
  Fixture fx;
  const auto op = build_kernel(fx.grid, Eigen::MatrixXd::Constant(40, 40, 0.7), 0.5, fx.m);
  EXPECT_LE((op.matrix_l * fx.m.values).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE(max_weighted_column_sum(op), 1e-14);
}

TEST(Kernel, SymmetricBalanceWithNonuniformEquilibrium) {
  const auto g = make_grid(1.0, 31, QuadratureRule::GaussLegendre);
  const auto m = normalized_equilibrium(g, [](double v) { return 1.0 + v * v; });
  const auto op = build_kernel(g, balanced_kernel(g, m, gauss_similarity), 1.0, m);
  EXPECT_LE((op.matrix_l * m.values).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(max_weighted_column_sum(op), 1e-13);
  EXPECT_GE(min_offdiagonal(op.matrix_ext), 0.0);
}

TEST(Kernel, UnbalancedKernelRejectedWithWorstNode) {
  Fixture fx;
  Eigen::MatrixXd k = Eigen::MatrixXd::Constant(40, 40, 1.0);
  k(3, 5) = 2.0;
  try {
    build_kernel(fx.grid, k, 0.0, fx.m);
    FAIL() << "expected rejection";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("worst node"), std::string::npos);
  }
  k(3, 5) = -1.0;
  EXPECT_THROW(build_kernel(fx.grid, k, 0.0, fx.m), ConfigError);
}

TEST(Elliptic, ConstantsAreNullModes) {
  Fixture fx;
  Eigen::VectorXd d = 1.0 + fx.grid.nodes.array().square();
  const auto op = build_elliptic(fx.grid, d, 0.0, fx.m);
  const double scale = op.matrix_l.cwiseAbs().maxCoeff();
  EXPECT_LE((op.matrix_l * Eigen::VectorXd::Ones(40)).cwiseAbs().maxCoeff(), 1e-14 * scale);
  EXPECT_LE(max_weighted_column_sum(op), 1e-13);
  EXPECT_TRUE((op.sigma.array() == 0.0).all());
}

TEST(Elliptic, FirstNeumannModeEigenvalue) {
  const double v_max = 1.0;
  const auto g = make_grid(v_max, 400);
  const auto op = build_elliptic(g, Eigen::VectorXd::Ones(400), 0.0, uniform_equilibrium(g));
  const double k = std::numbers::pi / (2.0 * v_max);
  const Eigen::VectorXd f = (k * g.nodes.array()).sin();
  const Eigen::VectorXd lf = op.matrix_l * f;
  EXPECT_LE((lf + k * k * f).cwiseAbs().maxCoeff() / (k * k), 1e-3);
}

TEST(Elliptic, Preconditions) {
  Fixture fx;
  EXPECT_THROW(build_elliptic(fx.grid, Eigen::VectorXd::Zero(40), 0.0, fx.m), ConfigError);
  const auto gl = make_grid(1.0, 40, QuadratureRule::GaussLegendre);
  EXPECT_THROW(build_elliptic(gl, Eigen::VectorXd::Ones(40), 0.0, uniform_equilibrium(gl)),
               ConfigError);
  const auto m = normalized_equilibrium(fx.grid, [](double v) { return 1.0 + v * v; });
  EXPECT_THROW(build_elliptic(fx.grid, Eigen::VectorXd::Ones(40), 0.0, m), ConfigError);
}

TEST(Operators, RandomNonnegativeVectorsConserveMass) {
  Fixture fx;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<DiscreteOperator> ops = {
      build_bgk(fx.grid, fx.m, 1.0),
      build_kernel(fx.grid, balanced_kernel(fx.grid, fx.m, gauss_similarity), 1.0, fx.m),
      build_elliptic(fx.grid, Eigen::VectorXd::Constant(40, 0.3), 1.0, fx.m)};
  for (const auto& op : ops) {
    EXPECT_GE(min_offdiagonal(op.matrix_ext), 0.0);
    EXPECT_LE(apply_ext(op, fx.m.values).cwiseAbs().maxCoeff(), 1e-10);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd f = Eigen::VectorXd::NullaryExpr(40, [&] { return u(rng); });
      EXPECT_LE(std::abs(fx.grid.weights.dot(op.matrix_l * f)), 1e-12 * f.norm());
    }
  }
}

TEST(Operators, GrowthRateMustBeNonnegative) {
  Fixture fx;
  EXPECT_THROW(build_bgk(fx.grid, fx.m, -1.0), ConfigError);
}

TEST(Operators, ScaledAndBarycentric) {
  Fixture fx;
  const auto op = build_bgk(fx.grid, fx.m, 1.0);
  const auto s = scaled(op, 2.0);
  EXPECT_LE((s.matrix_l - 2.0 * op.matrix_l).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(s.growth_rate, 1.0);
  const auto b = barycentric(op);
  EXPECT_EQ(b.growth_rate, 0.0);
  EXPECT_LE((b.matrix_ext - 0.5 * op.matrix_ext).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((b.matrix_l - b.matrix_ext).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Operators, LoadKernelCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "kfront_kernel_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "k.csv").string();
  {
    std::ofstream out(path);
    out << "# three-node kernel\n1,2,3\n4,5,6\n7,8,9\n";
  }
  const Eigen::MatrixXd k = load_kernel_csv(path, 3);
  EXPECT_EQ(k(1, 2), 6.0);
  EXPECT_THROW(load_kernel_csv(path, 4), ConfigError);
  {
    std::ofstream out(path);
    out << "1,2,x\n4,5,6\n7,8,9\n";
  }
  EXPECT_THROW(load_kernel_csv(path, 3), ConfigError);
  EXPECT_THROW(load_kernel_csv((dir / "missing.csv").string(), 3), ConfigError);
}
