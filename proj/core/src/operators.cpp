#include "kfront/operators.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "kfront/errors.hpp"

namespace kfront {
namespace {

void check_equilibrium(const VelocityGrid& grid, const Equilibrium& m) {
  if (m.values.size() != grid.count()) {
    throw ConfigError("equilibrium size does not match the velocity grid");
  }
  if ((m.values.array() < 0.0).any()) throw ConfigError("equilibrium must be nonnegative");
  const double mass = integrate(grid, m.values);
  if (std::abs(mass - 1.0) > 1e-10) {
    throw ConfigError(fmt::format("equilibrium is not normalized (mass {:.3e})", mass));
  }
}

void check_growth(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("growth rate must be >= 0");
}

// r (M w^T - I): the growth part of the extension.
Eigen::MatrixXd growth_block(const VelocityGrid& grid, const Equilibrium& m, double r) {
  Eigen::MatrixXd g = r * (m.values * grid.weights.transpose());
  g.diagonal().array() -= r;
  return g;
}

DiscreteOperator assemble(OperatorKind kind, const VelocityGrid& grid, const Equilibrium& m,
                          double r, Eigen::MatrixXd l, const Eigen::VectorXd& big_sigma) {
  DiscreteOperator op;
  op.kind = kind;
  op.grid = grid;
  op.equilibrium = m;
  op.growth_rate = r;
  op.matrix_ext = l + growth_block(grid, m, r);
  op.matrix_l = std::move(l);
  op.sigma = big_sigma.array() + r;
  return op;
}

}  // namespace

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::BGK: return "bgk";
    case OperatorKind::Kernel: return "kernel";
    case OperatorKind::EllipticNeumann: return "elliptic";
  }
  return "unknown";
}

Eigen::MatrixXd DiscreteOperator::gain() const {
  Eigen::MatrixXd g = matrix_ext;
  g.diagonal() += sigma;
  return g;
}

DiscreteOperator build_bgk(const VelocityGrid& grid, const Equilibrium& m, double r) {
  check_equilibrium(grid, m);
  check_growth(r);
  Eigen::MatrixXd l = m.values * grid.weights.transpose();
  l.diagonal().array() -= 1.0;
  return assemble(OperatorKind::BGK, grid, m, r, std::move(l),
                  Eigen::VectorXd::Ones(grid.count()));
}

DiscreteOperator build_kernel(const VelocityGrid& grid, const Eigen::MatrixXd& kernel, double r,
                              const Equilibrium& m) {
  check_equilibrium(grid, m);
  check_growth(r);
  const Eigen::Index n = grid.count();
  if (kernel.rows() != n || kernel.cols() != n) {
    throw ConfigError(fmt::format("kernel must be {0}x{0}, got {1}x{2}", n, kernel.rows(),
                                  kernel.cols()));
  }
  if (!kernel.allFinite() || (kernel.array() < 0.0).any()) {
    throw ConfigError("kernel entries must be finite and nonnegative");
  }
  // Sigma(v_j) = sum_i w_i K_ij
  const Eigen::VectorXd big_sigma = kernel.transpose() * grid.weights;
  const Eigen::VectorXd inflow = kernel * grid.weights.cwiseProduct(m.values);
  const Eigen::VectorXd outflow = m.values.cwiseProduct(big_sigma);
  double worst = 0.0;
  Eigen::Index worst_i = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::abs(inflow[i] - outflow[i]) / std::max(1.0, std::abs(outflow[i]));
    if (d > worst) {
      worst = d;
      worst_i = i;
    }
  }
  if (worst > 1e-8) {
    throw ConfigError(fmt::format(
        "kernel violates detailed balance: worst node {} (v = {:.6g}), mismatch {:.3e}", worst_i,
        grid.nodes[worst_i], worst));
  }
  Eigen::MatrixXd l = kernel * grid.weights.asDiagonal();
  l.diagonal() -= big_sigma;
  return assemble(OperatorKind::Kernel, grid, m, r, std::move(l), big_sigma);
}

DiscreteOperator build_elliptic(const VelocityGrid& grid, const Eigen::VectorXd& diffusivity,
                                double r, const Equilibrium& m) {
  check_equilibrium(grid, m);
  check_growth(r);
  const Eigen::Index n = grid.count();
  if (grid.rule != QuadratureRule::Midpoint) {
    throw ConfigError("elliptic operator requires a midpoint velocity grid");
  }
  if (diffusivity.size() != n) throw ConfigError("diffusivity size does not match the grid");
  if (!diffusivity.allFinite() || !(diffusivity.minCoeff() > 0.0)) {
    throw ConfigError("diffusivity must be positive");
  }
  const double m0 = m.values[0];
  if ((m.values.array() - m0).abs().maxCoeff() > 1e-12 * m0) {
    throw ConfigError("elliptic operator requires a uniform equilibrium");
  }
  const double dv = grid.weights[0];
  const double inv = 1.0 / (dv * dv);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double d = 0.5 * (diffusivity[i] + diffusivity[i + 1]) * inv;
    l(i, i) -= d;
    l(i, i + 1) += d;
    l(i + 1, i + 1) -= d;
    l(i + 1, i) += d;
  }
  return assemble(OperatorKind::EllipticNeumann, grid, m, r, std::move(l),
                  Eigen::VectorXd::Zero(n));
}

DiscreteOperator build_operator(const VelocityGrid& grid, const Equilibrium& m,
                                const OperatorSpec& spec) {
  switch (spec.kind) {
    case OperatorKind::BGK: return build_bgk(grid, m, spec.growth_rate);
    case OperatorKind::Kernel: return build_kernel(grid, spec.kernel_values, spec.growth_rate, m);
    case OperatorKind::EllipticNeumann:
      return build_elliptic(grid, spec.diffusivity, spec.growth_rate, m);
  }
  throw ConfigError("unknown operator kind");
}

Eigen::VectorXd apply_ext(const DiscreteOperator& op,
                          const Eigen::Ref<const Eigen::VectorXd>& f) {
  if (f.size() != op.grid.count()) {
    throw std::invalid_argument(fmt::format("apply_ext: expected {} values, got {}",
                                            op.grid.count(), f.size()));
  }
  return op.matrix_ext * f;
}

DiscreteOperator scaled(const DiscreteOperator& op, double mu) {
  if (!(mu > 0.0)) throw ConfigError("operator scale must be positive");
  const Eigen::VectorXd big_sigma = mu * (op.sigma.array() - op.growth_rate).matrix();
  return assemble(op.kind, op.grid, op.equilibrium, op.growth_rate, mu * op.matrix_l, big_sigma);
}

DiscreteOperator barycentric(const DiscreteOperator& op) {
  const double s = 1.0 + op.growth_rate;
  return assemble(op.kind, op.grid, op.equilibrium, 0.0, op.matrix_ext / s, op.sigma / s);
}

Eigen::MatrixXd balanced_kernel(const VelocityGrid& grid, const Equilibrium& m,
                                const std::function<double(double, double)>& s) {
  const Eigen::Index n = grid.count();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = m.values[i] * s(grid.nodes[i], grid.nodes[j]);
    }
  }
  return k;
}

Eigen::MatrixXd load_kernel_csv(const std::string& path, Eigen::Index n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open kernel file: " + path);
  Eigen::MatrixXd k(n, n);
  std::string line;
  Eigen::Index row = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (row >= n) throw ConfigError(fmt::format("{}: more than {} data rows", path, n));
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= n) throw ConfigError(fmt::format("{}:{}: more than {} columns", path, line_no, n));
      try {
        std::size_t used = 0;
        k(row, col) = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}:{}: not a number: '{}'", path, line_no, cell));
      }
      ++col;
    }
    if (col != n) throw ConfigError(fmt::format("{}:{}: expected {} columns", path, line_no, n));
    ++row;
  }
  if (row != n) throw ConfigError(fmt::format("{}: expected {} rows, got {}", path, n, row));
  return k;
}

}  // namespace kfront
