#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

#include "kfront/velocity_space.hpp"

namespace kfront {

enum class OperatorKind { BGK, Kernel, EllipticNeumann };

const char* to_string(OperatorKind kind);

struct OperatorSpec {
  OperatorKind kind = OperatorKind::BGK;
  Eigen::MatrixXd kernel_values;  // Kernel: K(v_i, v_j), row i, column j
  Eigen::VectorXd diffusivity;    // EllipticNeumann: D(v_i)
  double growth_rate = 0.0;
};

// Scattering operator L = P - Sigma and its growth extension
// Lext f = L f + r (M rho - f), both as dense matrices on node values.
struct DiscreteOperator {
  OperatorKind kind = OperatorKind::BGK;
  VelocityGrid grid;
  Equilibrium equilibrium;
  double growth_rate = 0.0;
  Eigen::MatrixXd matrix_l;
  Eigen::MatrixXd matrix_ext;
  Eigen::VectorXd sigma;  // Sigma(v_i) + r

  // Gain part of the extension: matrix_ext + diag(sigma).
  Eigen::MatrixXd gain() const;
};

DiscreteOperator build_bgk(const VelocityGrid& grid, const Equilibrium& m, double r);
DiscreteOperator build_kernel(const VelocityGrid& grid, const Eigen::MatrixXd& kernel, double r,
                              const Equilibrium& m);
DiscreteOperator build_elliptic(const VelocityGrid& grid, const Eigen::VectorXd& diffusivity,
                                double r, const Equilibrium& m);
DiscreteOperator build_operator(const VelocityGrid& grid, const Equilibrium& m,
                                const OperatorSpec& spec);

Eigen::VectorXd apply_ext(const DiscreteOperator& op, const Eigen::Ref<const Eigen::VectorXd>& f);

// The operator built from mu * L with the same growth rate.
DiscreteOperator scaled(const DiscreteOperator& op, double mu);

// (L + r(M rho - f)) / (1 + r) as a growth-free operator.
DiscreteOperator barycentric(const DiscreteOperator& op);

// Symmetric-balance kernel K_ij = M_i s(v_i, v_j) for a symmetric positive s.
Eigen::MatrixXd balanced_kernel(const VelocityGrid& grid, const Equilibrium& m,
                                const std::function<double(double, double)>& s);

// N x N nonnegative matrix, one row per line, comma separated; '#' lines skipped.
Eigen::MatrixXd load_kernel_csv(const std::string& path, Eigen::Index n);

}  // namespace kfront
