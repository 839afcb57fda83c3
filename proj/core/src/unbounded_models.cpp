#include "kfront/unbounded_models.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kfront/errors.hpp"
#include "kfront/operators.hpp"
#include "kfront/spectral.hpp"

namespace kfront {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void check_time(double t) {
  if (!(t > 0.0)) throw ConfigError("time must be positive");
}

double trapezoid_weight(std::size_t i, std::size_t n, double h) {
  return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

}  // namespace

double kolmogorov_density(const KolmogorovParams& prm, double t, double x, double v) {
  check_time(t);
  if (!(prm.sigma > 0.0)) throw ConfigError("sigma must be positive");
  const double a = v - prm.w;
  const double b = 2.0 * x - (v + prm.w) * t;
  const double s = prm.sigma;
  return std::sqrt(3.0) / (2.0 * kPi * s * t * t) *
         std::exp(-(a * a * t * t + 3.0 * b * b) / (4.0 * s * t * t * t));
}

double kolmogorov_phase(double sigma, double t, double x, double v) {
  check_time(t);
  const double b = 2.0 * x - v * t;
  return (v * v * t * t + 3.0 * b * b) / (4.0 * sigma * t * t * t);
}

double kolmogorov_phase_min(double sigma, double t, double x) {
  check_time(t);
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  return 3.0 * x * x / (4.0 * sigma * t * t * t);
}

double kolmogorov_level_set(double sigma, double t, double level) {
  check_time(t);
  if (!(level >= 0.0)) throw ConfigError("phase level must be >= 0");
  return std::sqrt(4.0 * sigma * t * t * t * level / 3.0);
}

VfpResult vfp_spectral(double sigma, double p, double half_width, int n) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  const double s4 = std::pow(sigma, 4);
  const double needed = s4 * std::abs(p) + 8.0 * sigma;
  if (!(half_width >= needed)) {
    throw ConfigError(fmt::format(
        "VFP truncation half-width {} too small; need at least sigma^4 |p| + 8 sigma = {}",
        half_width, needed));
  }
  if (n < 11) throw ConfigError("VFP grid needs at least 11 nodes");
  VfpResult res;
  res.h_value = s4 * p * p;
  res.v.resize(n);
  res.q.resize(n);
  const double h = 2.0 * half_width / (n - 1);
  const double mean = s4 * p;
  for (int i = 0; i < n; ++i) {
    const double v = -half_width + h * i;
    const double z = (v - mean) / sigma;
    res.v[i] = v;
    res.q[i] = std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
  }
  const int lo = static_cast<int>(std::ceil(0.1 * (n - 1)));
  const int hi = static_cast<int>(std::floor(0.9 * (n - 1)));
  double worst = 0.0;
  const double qmax = *std::max_element(res.q.begin(), res.q.end());
  const double inv_s2 = 1.0 / (sigma * sigma);
  for (int i = std::max(lo, 1); i <= std::min(hi, n - 2); ++i) {
    const double diff = (res.q[i + 1] - 2.0 * res.q[i] + res.q[i - 1]) / (h * h);
    const double drift =
        inv_s2 * (res.v[i + 1] * res.q[i + 1] - res.v[i - 1] * res.q[i - 1]) / (2.0 * h);
    const double r = diff + drift + res.v[i] * p * res.q[i] - res.h_value * res.q[i];
    worst = std::max(worst, std::abs(r));
  }
  res.relative_residual = worst / (qmax * std::max(1.0, std::abs(res.h_value)));
  return res;
}

NonlocalKernel NonlocalKernel::custom(std::vector<double> x, std::vector<double> k) {
  if (x.size() != k.size() || x.size() < 3) {
    throw ConfigError("custom kernel needs matching x and K samples (at least 3)");
  }
  const std::size_t n = x.size();
  const double h = x[1] - x[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (!(k[i] >= 0.0)) throw ConfigError("kernel must be nonnegative");
    if (std::abs(x[i] + x[n - 1 - i]) > 1e-12 * std::max(1.0, std::abs(x[i]))) {
      throw ConfigError("custom kernel grid must be symmetric");
    }
    if (i + 1 < n && std::abs((x[i + 1] - x[i]) - h) > 1e-9 * h) {
      throw ConfigError("custom kernel grid must be uniform");
    }
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) mass += trapezoid_weight(i, n, h) * k[i];
  if (!(mass > 0.0)) throw ConfigError("kernel has zero mass");
  for (double& v : k) v /= mass;
  return {KernelKind::Custom, std::move(x), std::move(k)};
}

std::string NonlocalKernel::name() const {
  switch (kind) {
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::Laplace: return "laplace";
    case KernelKind::Custom: return "custom";
  }
  return "unknown";
}

bool NonlocalKernel::in_domain(double p) const {
  if (!std::isfinite(p)) return false;
  if (kind == KernelKind::Laplace) return std::abs(p) < 1.0;
  return true;
}

cplx NonlocalKernel::fourier(double xi) const {
  switch (kind) {
    case KernelKind::Gaussian: return std::exp(-0.5 * xi * xi);
    case KernelKind::Laplace: return 1.0 / (1.0 + xi * xi);
    case KernelKind::Custom: {
      const std::size_t n = x.size();
      const double h = x[1] - x[0];
      cplx s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += trapezoid_weight(i, n, h) * k[i] * std::exp(cplx(0.0, -xi * x[i]));
      }
      return s;
    }
  }
  return 0.0;
}

double NonlocalKernel::exponential_moment(double p) const {
  if (!in_domain(p)) {
    throw ConfigError(fmt::format("p = {} outside the domain of the {} kernel", p, name()));
  }
  switch (kind) {
    case KernelKind::Gaussian: return std::exp(0.5 * p * p);
    case KernelKind::Laplace: return 1.0 / (1.0 - p * p);
    case KernelKind::Custom: {
      const std::size_t n = x.size();
      const double h = x[1] - x[0];
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += trapezoid_weight(i, n, h) * k[i] * std::exp(p * x[i]);
      return s;
    }
  }
  return 0.0;
}

double convolution_hamiltonian(const NonlocalKernel& kernel, double p) {
  if (!kernel.in_domain(p)) {
    throw ConfigError(fmt::format("p = {} outside the domain of the {} kernel", p, kernel.name()));
  }
  switch (kernel.kind) {
    case KernelKind::Gaussian: return std::expm1(0.5 * p * p);
    case KernelKind::Laplace: return p * p / (1.0 - p * p);
    case KernelKind::Custom: return kernel.exponential_moment(p) - 1.0;
  }
  return 0.0;
}

NonlocalEigvec nonlocal_eigvec(const NonlocalKernel& kernel, double p,
                               const NonlocalEigvecOptions& o) {
  if (!kernel.in_domain(p)) {
    throw ConfigError(fmt::format("p = {} outside the domain of the {} kernel", p, kernel.name()));
  }
  if (!(o.window > 0.0) || !(o.substep > 0.0) || !(o.synthesis_dxi > 0.0)) {
    throw ConfigError("nonlocal_eigvec: window and steps must be positive");
  }
  const double xi_max = o.xi_max > 0.0 ? o.xi_max : 7.0 / o.window;
  const auto half = static_cast<long>(std::ceil(xi_max / o.synthesis_dxi));
  const double dxi = xi_max / static_cast<double>(half);
  const auto sub = std::max(1L, static_cast<long>(std::ceil(dxi / o.substep)));
  const double h = dxi / static_cast<double>(sub);
  const cplx moment = kernel.exponential_moment(p);
  const cplx ip(0.0, p);

  auto integrand = [&](double xi) -> cplx {
    const cplx den = cplx(xi, 0.0) - ip;
    if (std::abs(den) < 1e-6) {
      // Removable point: the limit is the slope of the Fourier transform.
      const double d = 1e-4;
      return (kernel.fourier(xi + d) - kernel.fourier(xi - d)) / (2.0 * d);
    }
    return (kernel.fourier(xi) - moment) / den;
  };

  NonlocalEigvec res;
  const std::size_t nxi = static_cast<std::size_t>(2 * half + 1);
  res.xi.resize(nxi);
  res.fourier.resize(nxi);
  res.xi[half] = 0.0;
  res.fourier[half] = 1.0;
  for (int dir = -1; dir <= 1; dir += 2) {
    cplx acc = 0.0;
    double xi = 0.0;
    cplx prev = integrand(0.0);
    for (long k = 1; k <= half; ++k) {
      for (long s = 0; s < sub; ++s) {
        const double next_xi = dir * h * static_cast<double>((k - 1) * sub + s + 1);
        const cplx cur = integrand(next_xi);
        acc += 0.5 * (next_xi - xi) * (prev + cur);
        prev = cur;
        xi = next_xi;
      }
      const std::size_t idx = static_cast<std::size_t>(half + dir * k);
      res.xi[idx] = dir * dxi * static_cast<double>(k);
      res.fourier[idx] = std::exp(acc);
    }
  }

  auto window = [&](double xi) { return std::exp(-0.5 * xi * xi * o.window * o.window); };
  const double edge = std::max(std::abs(res.fourier.front()) * window(res.xi.front()),
                               std::abs(res.fourier.back()) * window(res.xi.back()));
  if (!(edge < 1e-8)) {
    throw SolverError(fmt::format(
        "nonlocal_eigvec: |F| = {:.3e} at xi = {} has not decayed below 1e-8", edge, xi_max));
  }

  res.v.resize(o.v_count);
  res.q.resize(o.v_count);
  const double dv = 2.0 * o.v_half_width / (o.v_count - 1);
  res.min_q = std::numeric_limits<double>::infinity();
  for (int j = 0; j < o.v_count; ++j) {
    const double v = -o.v_half_width + dv * j;
    cplx s = 0.0;
    for (std::size_t i = 0; i < nxi; ++i) {
      const double wgt = trapezoid_weight(i, nxi, dxi) * window(res.xi[i]);
      s += wgt * res.fourier[i] * std::exp(cplx(0.0, v * res.xi[i]));
    }
    s /= 2.0 * kPi;
    res.v[j] = v;
    res.q[j] = s.real();
    res.min_q = std::min(res.min_q, s.real());
    res.max_imag = std::max(res.max_imag, std::abs(s.imag()));
  }
  for (int j = 0; j < o.v_count; ++j) res.mass += trapezoid_weight(j, o.v_count, dv) * res.q[j];
  if (res.max_imag > 1e-6) {
    throw InvariantError(fmt::format("nonlocal_eigvec: reconstruction not real (imag {:.3e})",
                                     res.max_imag));
  }
  return res;
}

NonexistenceProbe spectral_nonexistence_probe(double sigma, double p,
                                              const std::vector<double>& half_widths, double dv) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(dv > 0.0)) throw ConfigError("dv must be positive");
  NonexistenceProbe probe;
  for (double hw : half_widths) {
    const int n = static_cast<int>(std::lround(2.0 * hw / dv));
    const VelocityGrid grid = make_grid(hw, n);
    const DiscreteOperator op =
        build_elliptic(grid, Eigen::VectorXd::Constant(n, sigma), 0.0, uniform_equilibrium(grid));
    probe.half_widths.push_back(hw);
    probe.eigenvalues.push_back(solve_direct(op, p).h_value);
  }
  probe.strictly_increasing = true;
  for (std::size_t i = 0; i + 1 < probe.eigenvalues.size(); ++i) {
    if (!(probe.eigenvalues[i + 1] > probe.eigenvalues[i])) probe.strictly_increasing = false;
  }
  return probe;
}

}  // namespace kfront
