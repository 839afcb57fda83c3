#pragma once

#include <Eigen/Core>
#include <vector>

#include "kfront/operators.hpp"

namespace kfront {

enum class SpectralMethod { Direct, KreinRutman, ClosedForm };

enum class PerronScheme {
  ShiftInvert,   // Noda iteration, default
  ShiftedPower,  // plain power iteration on A_p + cI
};

struct PerronOptions {
  PerronScheme scheme = PerronScheme::ShiftInvert;
  double tol = 1e-12;
  int max_iter = 100000;
};

// Principal eigenelements of Lext + v p.
struct SpectralSolution {
  double p = 0.0;
  double h_value = 0.0;
  Eigen::VectorXd q;      // sum_i w_i q_i = 1
  Eigen::VectorXd w_adj;  // empty until solve_adjoint; sum_i w_i w_adj_i q_i = 1
  double residual = 0.0;  // ||Lext q + v p q - H q||_inf
  SpectralMethod method = SpectralMethod::Direct;
  int iterations = 0;

  bool has_adjoint() const { return w_adj.size() > 0; }
};

// A_p = matrix_ext + diag(v_i p)
Eigen::MatrixXd momentum_matrix(const DiscreteOperator& op, double p);

SpectralSolution solve_direct(const DiscreteOperator& op, double p,
                              const PerronOptions& options = {});

// Spectral radius of T_lambda = diag(1 / (sigma_i + lambda - v_i p)) * gain.
double krein_rutman_mu(const DiscreteOperator& op, double p, double lambda,
                       Eigen::VectorXd* fixed_vector = nullptr);

// Bisects mu_lambda = 1 on (lambda*, lambda_hi]; lambda tolerance 1e-10.
SpectralSolution solve_krein_rutman(const DiscreteOperator& op, double p);

// Fills w_adj from the adjoint W^{-1} A_p^T W under <a|b> = sum_i w_i a_i b_i.
SpectralSolution solve_adjoint(const DiscreteOperator& op, double p, const SpectralSolution& sol,
                               const PerronOptions& options = {});

// H(p) for BGK with uniform M on [-v_max, v_max] from the dispersion relation.
double dispersion_bgk(double v_max, double r, double p);

// Same relation with the discrete quadrature of an arbitrary equilibrium.
double dispersion_bgk(const VelocityGrid& grid, const Equilibrium& m, double r, double p);

// H'(p) = <W | v Q> / <W | Q>
double group_velocity(const DiscreteOperator& op, const SpectralSolution& sol);

struct ConvexityReport {
  double min_second_difference = 0.0;  // min over interior nodes of H''
  double argmin_p = 0.0;
  bool convex_on_grid = true;
};

// Reported only: convexity of H is not guaranteed in general.
ConvexityReport convexity_diagnostic(const std::vector<double>& p_grid,
                                     const std::vector<double>& h_values);

}  // namespace kfront
