#include "kfront/spectral.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "kfront/errors.hpp"
#include "kfront/perron.hpp"

namespace kfront {
namespace {

constexpr double kResidualTol = 1e-8;

double residual_of(const Eigen::MatrixXd& a, const Eigen::VectorXd& q, double h) {
  return (a * q - h * q).lpNorm<Eigen::Infinity>();
}

PerronPair principal_pair(const Eigen::MatrixXd& a, const Eigen::VectorXd& start,
                          const Eigen::VectorXd& weights, double shift_floor,
                          const PerronOptions& options) {
  if (options.scheme == PerronScheme::ShiftedPower) {
    // Off-diagonals are nonnegative; the shift only has to cover the diagonal.
    const double shift = std::max(shift_floor, -a.diagonal().minCoeff()) + 1.0;
    return perron_shifted_power(a, shift, start, weights, options.tol, options.max_iter);
  }
  return perron_noda(a, start, weights, options.tol, options.max_iter);
}

void check_solution(const char* who, double p, const SpectralSolution& sol) {
  if (sol.q.minCoeff() < -1e-12) {
    throw InvariantError(fmt::format("{}: eigenvector has a negative entry {:.3e} at p = {}", who,
                                     sol.q.minCoeff(), p));
  }
  if (sol.residual > kResidualTol * std::max(1.0, std::abs(sol.h_value))) {
    throw SolverError(fmt::format("{}: eigen-residual {:.3e} too large at p = {}", who,
                                  sol.residual, p));
  }
}

// Root of a decreasing function on (lo, hi), bisected to floating-point resolution.
double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi) {
  for (int k = 0; k < 400; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Eigen::MatrixXd momentum_matrix(const DiscreteOperator& op, double p) {
  Eigen::MatrixXd a = op.matrix_ext;
  a.diagonal() += p * op.grid.nodes;
  return a;
}

SpectralSolution solve_direct(const DiscreteOperator& op, double p, const PerronOptions& options) {
  if (!std::isfinite(p)) throw ConfigError("momentum p must be finite");
  const Eigen::MatrixXd a = momentum_matrix(op, p);
  const double shift_floor = (op.sigma.array() + (p * op.grid.nodes).array().abs()).maxCoeff();
  const PerronPair pair =
      principal_pair(a, op.equilibrium.values, op.grid.weights, shift_floor, options);
  if (!pair.converged) {
    throw SolverError(fmt::format(
        "solve_direct: no convergence at p = {} after {} iterations (last increment {:.3e})", p,
        pair.iterations, pair.last_increment));
  }
  SpectralSolution sol;
  sol.p = p;
  sol.h_value = pair.eigenvalue;
  sol.q = pair.vector;
  sol.method = SpectralMethod::Direct;
  sol.iterations = pair.iterations;
  sol.residual = residual_of(a, sol.q, sol.h_value);
  check_solution("solve_direct", p, sol);
  return sol;
}

double krein_rutman_mu(const DiscreteOperator& op, double p, double lambda,
                       Eigen::VectorXd* fixed_vector) {
  const Eigen::ArrayXd denom = op.sigma.array() + lambda - p * op.grid.nodes.array();
  if (!(denom.minCoeff() > 0.0)) {
    throw ConfigError("krein_rutman_mu: lambda must exceed max_i(v_i p - sigma_i)");
  }
  const Eigen::MatrixXd t = denom.inverse().matrix().asDiagonal() * op.gain();
  const PerronPair pair =
      perron_nonnegative(t, op.equilibrium.values, op.grid.weights, 1e-14, 100000);
  if (!pair.converged) {
    throw SolverError(fmt::format("krein_rutman_mu: power iteration stalled at lambda = {}",
                                  lambda));
  }
  if (fixed_vector != nullptr) *fixed_vector = pair.vector;
  return pair.eigenvalue;
}

SpectralSolution solve_krein_rutman(const DiscreteOperator& op, double p) {
  if (op.kind == OperatorKind::EllipticNeumann) {
    throw ConfigError("solve_krein_rutman: requires a BGK or kernel operator");
  }
  if (!(op.gain().minCoeff() > 0.0)) {
    throw ConfigError("solve_krein_rutman: gain operator must be strictly positive");
  }
  const double lambda_star = (p * op.grid.nodes - op.sigma).maxCoeff();
  double offset = 1.0;
  int doublings = 0;
  while (krein_rutman_mu(op, p, lambda_star + offset) >= 1.0) {
    if (++doublings > 60) {
      throw SolverError(fmt::format("solve_krein_rutman: mu > 1 at every bracket, p = {}", p));
    }
    offset *= 2.0;
  }
  double lo = lambda_star;
  double hi = lambda_star + offset;
  int steps = 0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (krein_rutman_mu(op, p, mid) > 1.0 ? lo : hi) = mid;
    ++steps;
  }
  SpectralSolution sol;
  sol.p = p;
  sol.h_value = 0.5 * (lo + hi);
  krein_rutman_mu(op, p, sol.h_value, &sol.q);
  sol.q /= integrate(op.grid, sol.q);
  sol.method = SpectralMethod::KreinRutman;
  sol.iterations = steps;
  sol.residual = residual_of(momentum_matrix(op, p), sol.q, sol.h_value);
  if (sol.q.minCoeff() < -1e-12) {
    throw InvariantError("solve_krein_rutman: fixed vector lost positivity");
  }
  return sol;
}

SpectralSolution solve_adjoint(const DiscreteOperator& op, double p, const SpectralSolution& sol,
                               const PerronOptions& options) {
  const Eigen::VectorXd& w = op.grid.weights;
  const Eigen::MatrixXd a = momentum_matrix(op, p);
  const Eigen::MatrixXd adj = w.cwiseInverse().asDiagonal() * a.transpose() * w.asDiagonal();
  const double shift_floor = (op.sigma.array() + (p * op.grid.nodes).array().abs()).maxCoeff();
  const PerronPair pair =
      principal_pair(adj, Eigen::VectorXd::Ones(w.size()), w, shift_floor, options);
  if (!pair.converged) {
    throw SolverError(fmt::format("solve_adjoint: no convergence at p = {}", p));
  }
  if (std::abs(pair.eigenvalue - sol.h_value) > 1e-6) {
    throw InvariantError(fmt::format(
        "solve_adjoint: adjoint eigenvalue {:.12g} disagrees with H = {:.12g} at p = {}",
        pair.eigenvalue, sol.h_value, p));
  }
  SpectralSolution out = sol;
  const double pairing = w.dot(pair.vector.cwiseProduct(sol.q));
  out.w_adj = pair.vector / pairing;
  return out;
}

double dispersion_bgk(double v_max, double r, double p) {
  if (!std::isfinite(p)) throw ConfigError("momentum p must be finite");
  if (!(v_max > 0.0)) throw ConfigError("v_max must be positive");
  if (!(r >= 0.0)) throw ConfigError("growth rate must be >= 0");
  if (p == 0.0) return 0.0;
  const double b = v_max * std::abs(p);
  const double s = 1.0 + r;
  // (1+r)/(2b) ln((a+b)/(a-b)) - 1 with a = 1 + r + H
  auto f = [&](double h) {
    const double a = s + h;
    return s / (2.0 * b) * std::log1p(2.0 * b / (a - b)) - 1.0;
  };
  return bisect_decreasing(f, b - s, b + s + 10.0);
}

double dispersion_bgk(const VelocityGrid& grid, const Equilibrium& m, double r, double p) {
  if (!std::isfinite(p)) throw ConfigError("momentum p must be finite");
  if (p == 0.0) return 0.0;
  const double s = 1.0 + r;
  const Eigen::ArrayXd vp = p * grid.nodes.array();
  const Eigen::ArrayXd mass = s * grid.weights.array() * m.values.array();
  auto f = [&](double h) { return (mass / (s + h - vp)).sum() - 1.0; };
  const double lo = vp.maxCoeff() - s;
  return bisect_decreasing(f, lo, lo + 2.0 * s + 2.0 * std::abs(p) * grid.v_max + 10.0);
}

double group_velocity(const DiscreteOperator& op, const SpectralSolution& sol) {
  if (!sol.has_adjoint()) throw ConfigError("group_velocity: adjoint eigenvector missing");
  const Eigen::ArrayXd wq =
      op.grid.weights.array() * sol.w_adj.array() * sol.q.array();
  return (wq * op.grid.nodes.array()).sum() / wq.sum();
}

ConvexityReport convexity_diagnostic(const std::vector<double>& p_grid,
                                     const std::vector<double>& h_values) {
  if (p_grid.size() != h_values.size() || p_grid.size() < 3) {
    throw ConfigError("convexity_diagnostic: need at least three matching samples");
  }
  ConvexityReport rep;
  rep.min_second_difference = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < p_grid.size(); ++i) {
    const double hl = p_grid[i] - p_grid[i - 1];
    const double hr = p_grid[i + 1] - p_grid[i];
    const double d2 = 2.0 *
                      (hl * h_values[i + 1] - (hl + hr) * h_values[i] + hr * h_values[i - 1]) /
                      (hl * hr * (hl + hr));
    if (d2 < rep.min_second_difference) {
      rep.min_second_difference = d2;
      rep.argmin_p = p_grid[i];
    }
  }
  rep.convex_on_grid = rep.min_second_difference >= -1e-8;
  return rep;
}

}  // namespace kfront
