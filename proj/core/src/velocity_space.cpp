#include "kfront/velocity_space.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "kfront/errors.hpp"

namespace kfront {
namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

void fill_gauss_legendre(VelocityGrid& grid, int n) {
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(static_cast<size_t>(n)),
            &gsl_integration_glfixed_table_free);
  if (!table) throw SolverError("velocity_space: Gauss-Legendre table allocation failed");
  // GSL's large-n tables are good to ~1e-10; two Newton steps restore full precision.
  for (int i = n / 2; i < n; ++i) {
    double x = 0.0;
    double w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &x, &w, table.get());
    double dp = 0.0;
    if (x != 0.0) {
      for (int it = 0; it < 2; ++it) {
        const auto [p, d] = legendre_with_derivative(n, x);
        x -= p / d;
      }
    }
    dp = legendre_with_derivative(n, x).second;
    w = 2.0 / ((1.0 - x * x) * dp * dp);
    const int j = n - 1 - i;
    grid.nodes[i] = grid.v_max * x;
    grid.nodes[j] = -grid.v_max * x;
    grid.weights[i] = grid.v_max * w;
    grid.weights[j] = grid.v_max * w;
  }
}

}  // namespace

VelocityGrid make_grid(double v_max, int n, QuadratureRule rule) {
  if (n < 3) throw ConfigError("velocity grid needs at least 3 nodes, got " + std::to_string(n));
  if (!(v_max > 0.0) || !std::isfinite(v_max)) {
    throw ConfigError("v_max must be a positive finite number");
  }
  VelocityGrid grid;
  grid.v_max = v_max;
  grid.rule = rule;
  grid.nodes.resize(n);
  grid.weights.resize(n);
  if (rule == QuadratureRule::Midpoint) {
    const double dv = 2.0 * v_max / n;
    for (int i = 0; i < n; ++i) {
      // Pair-wise construction keeps v_i = -v_{n-1-i} bit-exact.
      const double half = 0.5 * (n - 1 - 2 * i);
      grid.nodes[i] = -half * dv;
      grid.weights[i] = dv;
    }
  } else {
    fill_gauss_legendre(grid, n);
  }
  return grid;
}

Equilibrium uniform_equilibrium(const VelocityGrid& grid) {
  Equilibrium eq;
  eq.values = Eigen::VectorXd::Constant(grid.count(), 1.0 / (2.0 * grid.v_max));
  return eq;
}

Equilibrium normalized_equilibrium(const VelocityGrid& grid,
                                   const std::function<double(double)>& density) {
  Equilibrium eq;
  eq.values.resize(grid.count());
  for (Eigen::Index i = 0; i < grid.count(); ++i) {
    const double m = density(grid.nodes[i]);
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw ConfigError("equilibrium density must be finite and nonnegative");
    }
    eq.values[i] = m;
  }
  const Eigen::Index n = grid.count();
  for (Eigen::Index i = 0; i < n / 2; ++i) {
    const double avg = 0.5 * (eq.values[i] + eq.values[n - 1 - i]);
    eq.values[i] = avg;
    eq.values[n - 1 - i] = avg;
  }
  const double mass = integrate(grid, eq.values);
  if (!(mass > 0.0)) throw ConfigError("equilibrium density has zero mass on the grid");
  eq.values /= mass;
  return eq;
}

double integrate(const VelocityGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (values.size() != grid.count()) {
    throw std::invalid_argument("integrate: expected " + std::to_string(grid.count()) +
                                " values, got " + std::to_string(values.size()));
  }
  return grid.weights.dot(values);
}

}  // namespace kfront
