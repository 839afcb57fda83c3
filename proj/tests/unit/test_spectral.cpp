#include <gtest/gtest.h>

#include <cmath>

#include "kfront/errors.hpp"
#include "kfront/spectral.hpp"

using namespace kfront;

namespace {

double bgk_closed(double p, double r) {
  if (p == 0.0) return 0.0;
  return p / std::tanh(p / (1.0 + r)) - (1.0 + r);
}

double similarity(double a, double b) { return std::exp(-0.5 * (a - b) * (a - b)) + 0.2; }

DiscreteOperator gl_bgk(double r, int n = 401) {
  const auto g = make_grid(1.0, n, QuadratureRule::GaussLegendre);
  return build_bgk(g, uniform_equilibrium(g), r);
}

DiscreteOperator balanced_kernel_op(double r) {
  const auto g = make_grid(1.0, 64, QuadratureRule::GaussLegendre);
  const auto m = normalized_equilibrium(g, [](double v) { return 2.0 - v * v; });
  return build_kernel(g, balanced_kernel(g, m, similarity), r, m);
}

DiscreteOperator elliptic_op(double r) {
  const auto g = make_grid(1.0, 120);
  return build_elliptic(g, Eigen::VectorXd::Constant(120, 0.5), r, uniform_equilibrium(g));
}

}  // namespace

TEST(SolveDirect, ZeroMomentumGivesEquilibrium) {
  for (const auto& op : {gl_bgk(1.0, 64), balanced_kernel_op(0.5), elliptic_op(1.0)}) {
    const auto s = solve_direct(op, 0.0);
    EXPECT_NEAR(s.h_value, 0.0, 1e-10);
    EXPECT_LE((s.q - op.equilibrium.values).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SolveDirect, BgkWithoutGrowthAtUnitMomentum) {
  const auto s = solve_direct(gl_bgk(0.0), 1.0);
  EXPECT_NEAR(s.h_value, 1.0 / std::tanh(1.0) - 1.0, 1e-6);
  EXPECT_NEAR(s.h_value, 0.313035, 1e-6);
}

TEST(SolveDirect, BgkClosedFormWithGrowth) {
  const auto op = gl_bgk(1.0);
  for (double p : {-3.0, -0.7, 0.25, 1.5, 4.0}) {
    EXPECT_NEAR(solve_direct(op, p).h_value, bgk_closed(p, 1.0), 1e-6) << "p = " << p;
  }
}

TEST(SolveDirect, MatchesDiscreteDispersionOnAnyGrid) {
  // The discrete BGK eigenvalue is the root of sum_i w_i (1+r) M_i / (1+r+H-v_i p) = 1.
  const auto g = make_grid(1.0, 101);
  const auto m = normalized_equilibrium(g, [](double v) { return std::exp(v * v); });
  const auto op = build_bgk(g, m, 0.7);
  for (double p : {0.3, 1.0, 5.0}) {
    EXPECT_NEAR(solve_direct(op, p).h_value, dispersion_bgk(g, m, 0.7, p), 1e-11);
  }
}

TEST(SolveDirect, InvariantsOfTheSolution) {
  const auto op = balanced_kernel_op(1.0);
  const auto s = solve_direct(op, 1.3);
  EXPECT_GT(s.q.minCoeff(), 0.0);
  EXPECT_NEAR(integrate(op.grid, s.q), 1.0, 1e-12);
  EXPECT_LE(s.residual, 1e-8 * std::max(1.0, std::abs(s.h_value)));
}

TEST(SolveDirect, PowerAndShiftInvertAgree) {
  PerronOptions power;
  power.scheme = PerronScheme::ShiftedPower;
  for (const auto& op : {gl_bgk(1.0, 64), balanced_kernel_op(1.0)}) {
    const auto a = solve_direct(op, 1.0);
    const auto b = solve_direct(op, 1.0, power);
    EXPECT_NEAR(a.h_value, b.h_value, 1e-9);
  }
}

TEST(SolveDirect, EllipticOperator) {
  const auto op = elliptic_op(1.0);
  const auto s = solve_direct(op, 0.8);
  EXPECT_GT(s.h_value, 0.0);
  EXPECT_LE(s.h_value, 0.8 * op.grid.v_max);
  EXPECT_GT(s.q.minCoeff(), 0.0);
}

TEST(SolveDirect, NonFiniteMomentumRejected) {
  EXPECT_THROW(solve_direct(gl_bgk(0.0, 16), std::nan("")), ConfigError);
}

TEST(KreinRutman, AgreesWithDirect) {
  for (const auto& op : {gl_bgk(1.0), balanced_kernel_op(1.0)}) {
    for (double p : {0.5, 1.0, 2.0}) {
      const auto d = solve_direct(op, p);
      const auto k = solve_krein_rutman(op, p);
      EXPECT_NEAR(d.h_value, k.h_value, 1e-8);
      EXPECT_LE((d.q - k.q).cwiseAbs().maxCoeff() / d.q.cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(KreinRutman, ZeroMomentumRoot) {
  EXPECT_NEAR(solve_krein_rutman(balanced_kernel_op(0.5), 0.0).h_value, 0.0, 1e-9);
}

TEST(KreinRutman, MuDecreasesInLambda) {
  const auto op = balanced_kernel_op(1.0);
  const double p = 1.0;
  const double lambda_star = (p * op.grid.nodes - op.sigma).maxCoeff();
  double prev = krein_rutman_mu(op, p, lambda_star + 0.01);
  for (double l : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    const double mu = krein_rutman_mu(op, p, lambda_star + l);
    EXPECT_LT(mu, prev);
    prev = mu;
  }
}

TEST(KreinRutman, RejectsElliptic) {
  EXPECT_THROW(solve_krein_rutman(elliptic_op(0.0), 1.0), ConfigError);
}

TEST(Adjoint, ZeroMomentumIsConstant) {
  const auto op = balanced_kernel_op(1.0);
  const auto s = solve_adjoint(op, 0.0, solve_direct(op, 0.0));
  EXPECT_LE((s.w_adj.array() - 1.0).abs().maxCoeff(), 1e-8);
}

TEST(Adjoint, BgkProfile) {
  const double r = 1.0;
  const double p = 1.7;
  const auto op = gl_bgk(r, 128);
  const auto s = solve_adjoint(op, p, solve_direct(op, p));
  const Eigen::ArrayXd shape = 1.0 / ((1.0 + r) + s.h_value - p * op.grid.nodes.array());
  const Eigen::ArrayXd ratio = s.w_adj.array() / shape;
  EXPECT_LE((ratio / ratio.mean() - 1.0).abs().maxCoeff(), 1e-8);
  EXPECT_NEAR(op.grid.weights.dot(s.w_adj.cwiseProduct(s.q)), 1.0, 1e-12);
}

TEST(GroupVelocity, ZeroAtOriginBoundedAndMatchesFiniteDifference) {
  for (const auto& op : {gl_bgk(1.0, 201), balanced_kernel_op(1.0), elliptic_op(1.0)}) {
    const auto s0 = solve_adjoint(op, 0.0, solve_direct(op, 0.0));
    EXPECT_NEAR(group_velocity(op, s0), 0.0, 1e-8);
    for (double p : {-2.0, 0.4, 1.1, 3.0}) {
      const auto s = solve_adjoint(op, p, solve_direct(op, p));
      const double gv = group_velocity(op, s);
      EXPECT_LE(std::abs(gv), op.grid.v_max + 1e-8);
      const double d = 1e-4;
      const double fd = (solve_direct(op, p + d).h_value - solve_direct(op, p - d).h_value) / (2 * d);
      EXPECT_NEAR(gv, fd, 1e-4);
    }
  }
}

TEST(GroupVelocity, NeedsAdjoint) {
  const auto op = gl_bgk(0.0, 16);
  EXPECT_THROW(group_velocity(op, solve_direct(op, 1.0)), ConfigError);
}

TEST(Properties, SublinearAndEven) {
  for (const auto& op : {gl_bgk(1.0, 128), balanced_kernel_op(1.0), elliptic_op(0.5)}) {
    for (double p : {0.3, 1.0, 2.5, 6.0}) {
      const double h = solve_direct(op, p).h_value;
      EXPECT_LE(std::abs(h), op.grid.v_max * p + 1e-10);
      EXPECT_NEAR(h, solve_direct(op, -p).h_value, 1e-10);
    }
  }
}

TEST(Properties, ScalingIdentity) {
  for (const auto& op : {gl_bgk(0.0, 128), balanced_kernel_op(0.0)}) {
    for (double mu : {0.5, 2.0}) {
      const auto sop = scaled(op, mu);
      for (double p : {0.5, 1.0, 2.0}) {
        EXPECT_NEAR(solve_direct(sop, p).h_value, mu * solve_direct(op, p / mu).h_value, 1e-8);
      }
    }
  }
}

TEST(Properties, BarycentricIdentity) {
  for (const auto& op : {gl_bgk(1.0, 128), balanced_kernel_op(2.0)}) {
    const double r = op.growth_rate;
    const auto b = barycentric(op);
    for (double p : {0.5, 1.5, 3.0}) {
      EXPECT_NEAR(solve_direct(op, p).h_value,
                  (1.0 + r) * solve_direct(b, p / (1.0 + r)).h_value, 1e-8);
    }
  }
}

TEST(Dispersion, ClosedFormAgreement) {
  for (double r : {0.0, 0.5, 1.0, 3.0}) {
    for (double p : {1e-3, 0.5, 1.0, 2.0, 7.0, 15.0}) {
      EXPECT_NEAR(dispersion_bgk(1.0, r, p), bgk_closed(p, r), 1e-10) << r << " " << p;
      EXPECT_EQ(dispersion_bgk(1.0, r, p), dispersion_bgk(1.0, r, -p));
    }
  }
  EXPECT_EQ(dispersion_bgk(1.0, 1.0, 0.0), 0.0);
}

TEST(Dispersion, GeneralHalfWidth) {
  // The uniform case depends on v_max p / (1 + r) only through the scaling H -> v_max-rescaled.
  const double v_max = 2.5;
  const auto g = make_grid(v_max, 301, QuadratureRule::GaussLegendre);
  const auto op = build_bgk(g, uniform_equilibrium(g), 1.0);
  EXPECT_NEAR(dispersion_bgk(v_max, 1.0, 0.9), solve_direct(op, 0.9).h_value, 1e-8);
}

TEST(Convexity, DiagnosticOnly) {
  std::vector<double> p, up, down;
  for (int i = -10; i <= 10; ++i) {
    p.push_back(0.1 * i);
    up.push_back(p.back() * p.back());
    down.push_back(-p.back() * p.back());
  }
  EXPECT_TRUE(convexity_diagnostic(p, up).convex_on_grid);
  EXPECT_NEAR(convexity_diagnostic(p, up).min_second_difference, 2.0, 1e-9);
  EXPECT_FALSE(convexity_diagnostic(p, down).convex_on_grid);
}
