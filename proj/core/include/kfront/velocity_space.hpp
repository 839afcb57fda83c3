#pragma once

#include <Eigen/Core>
#include <functional>

namespace kfront {

enum class QuadratureRule { Midpoint, GaussLegendre };

// Symmetric velocity interval [-v_max, v_max] with a positive quadrature.
struct VelocityGrid {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  double v_max = 0.0;
  QuadratureRule rule = QuadratureRule::Midpoint;

  Eigen::Index count() const { return nodes.size(); }
};

// Equilibrium density sampled at the grid nodes.
struct Equilibrium {
  Eigen::VectorXd values;
};

VelocityGrid make_grid(double v_max, int n, QuadratureRule rule = QuadratureRule::Midpoint);

Equilibrium uniform_equilibrium(const VelocityGrid& grid);

// Samples an even density and rescales it to unit discrete mass.
Equilibrium normalized_equilibrium(const VelocityGrid& grid,
                                   const std::function<double(double)>& density);

double integrate(const VelocityGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& values);

}  // namespace kfront
