#pragma once

#include <Eigen/Core>

namespace kfront {

// Principal (largest real) eigenpair of an irreducible matrix with
// nonnegative off-diagonal entries.
struct PerronPair {
  double eigenvalue = 0.0;
  Eigen::VectorXd vector;  // positive, normalized to sum_i w_i x_i = 1
  int iterations = 0;
  double last_increment = 0.0;
  bool converged = false;
};

// Power iteration on a + shift*I (which must be entrywise nonnegative).
PerronPair perron_shifted_power(const Eigen::MatrixXd& a, double shift,
                                const Eigen::VectorXd& start, const Eigen::VectorXd& weights,
                                double tol, int max_iter);

// Shift-invert iteration with Collatz-Wielandt shift updates (Noda iteration).
// Every iterate stays positive; convergence is quadratic near the root.
PerronPair perron_noda(const Eigen::MatrixXd& a, const Eigen::VectorXd& start,
                       const Eigen::VectorXd& weights, double tol, int max_iter);

// Spectral radius of an entrywise nonnegative matrix by power iteration.
PerronPair perron_nonnegative(const Eigen::MatrixXd& t, const Eigen::VectorXd& start,
                              const Eigen::VectorXd& weights, double tol, int max_iter);

}  // namespace kfront
