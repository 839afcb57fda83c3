#include "kfront/perron.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "kfront/errors.hpp"

namespace kfront {
namespace {

Eigen::VectorXd normalized(const Eigen::VectorXd& x, const Eigen::VectorXd& weights) {
  const double s = weights.dot(x);
  if (!(s > 0.0) || !std::isfinite(s)) throw SolverError("Perron iterate lost positivity");
  return x / s;
}

PerronPair power_loop(const Eigen::MatrixXd& b, const Eigen::VectorXd& start,
                      const Eigen::VectorXd& weights, double tol, int max_iter) {
  PerronPair out;
  Eigen::VectorXd x = normalized(start, weights);
  double lambda = weights.dot(b * x);
  for (int k = 1; k <= max_iter; ++k) {
    Eigen::VectorXd y = b * x;
    const double next = weights.dot(y);
    Eigen::VectorXd x_next = normalized(y, weights);
    // The weighted estimate can stall while the vector still moves, so require both.
    const double moved = (x_next - x).cwiseAbs().maxCoeff() / x_next.cwiseAbs().maxCoeff();
    x = std::move(x_next);
    out.iterations = k;
    out.last_increment = std::max(std::abs(next - lambda), moved * std::max(1.0, std::abs(next)));
    lambda = next;
    if (out.last_increment <= tol * std::max(1.0, std::abs(lambda))) {
      out.converged = true;
      break;
    }
  }
  out.eigenvalue = lambda;
  out.vector = std::move(x);
  return out;
}

}  // namespace

PerronPair perron_shifted_power(const Eigen::MatrixXd& a, double shift,
                                const Eigen::VectorXd& start, const Eigen::VectorXd& weights,
                                double tol, int max_iter) {
  Eigen::MatrixXd b = a;
  b.diagonal().array() += shift;
  if ((b.array() < 0.0).any()) throw SolverError("shifted matrix has negative entries");
  PerronPair out = power_loop(b, start, weights, tol, max_iter);
  out.eigenvalue -= shift;
  return out;
}

PerronPair perron_nonnegative(const Eigen::MatrixXd& t, const Eigen::VectorXd& start,
                              const Eigen::VectorXd& weights, double tol, int max_iter) {
  return power_loop(t, start, weights, tol, max_iter);
}

PerronPair perron_noda(const Eigen::MatrixXd& a, const Eigen::VectorXd& start,
                       const Eigen::VectorXd& weights, double tol, int max_iter) {
  const Eigen::Index n = a.rows();
  PerronPair out;
  Eigen::VectorXd x = normalized(start, weights);
  Eigen::MatrixXd shifted(n, n);
  double upper_prev = 0.0;
  for (int k = 0; k < max_iter; ++k) {
    const Eigen::VectorXd y = a * x;
    const Eigen::ArrayXd ratio = y.array() / x.array();
    const double upper = ratio.maxCoeff();
    const double lower = ratio.minCoeff();
    const double scale = std::max(1.0, std::abs(upper));
    out.iterations = k;
    out.eigenvalue = 0.5 * (upper + lower);
    out.last_increment = k == 0 ? upper - lower : std::abs(upper_prev - upper);
    if (upper - lower <= tol * scale || (k > 0 && out.last_increment <= tol * scale)) {
      out.converged = true;
      break;
    }
    upper_prev = upper;
    shifted = -a;
    shifted.diagonal().array() += upper;
    Eigen::VectorXd z = shifted.partialPivLu().solve(x);
    if (!z.allFinite() || !(z.minCoeff() > 0.0)) {
      // The shift hit the eigenvalue to working precision.
      out.converged = upper - lower <= 1e-9 * scale;
      break;
    }
    x = normalized(z, weights);
  }
  out.vector = std::move(x);
  return out;
}

}  // namespace kfront
