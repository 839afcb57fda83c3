#include "kfront/hamiltonian.hpp"

#include <fmt/format.h>

#include <math.h>  // pchip.hpp calls isnan unqualified

#include <algorithm>
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <functional>

#include "kfront/errors.hpp"
#include "kfront/parallel.hpp"
#include "kfront/spectral.hpp"

namespace kfront {

struct model::Tabulated::Interpolant {
  boost::math::interpolators::pchip<std::vector<double>> spline;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498949;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// x coth x - 1 and its derivative, with series near 0.
double xcoth_minus_one(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) return x * x / 3.0 - x * x * x * x / 45.0;
  return ax / std::tanh(ax) - 1.0;
}

double xcoth_prime(double x) {
  const double ax = std::abs(x);
  double d;
  if (ax < 1e-4) {
    d = 2.0 * ax / 3.0 - 4.0 * ax * ax * ax / 45.0;
  } else if (ax > 350.0) {
    d = 1.0;
  } else {
    const double s = std::sinh(ax);
    d = 1.0 / std::tanh(ax) - ax / (s * s);
  }
  return x < 0.0 ? -d : d;
}

// Maximizer of a unimodal f on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b, double tol,
                  int* iterations = nullptr) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (b - a > tol && it < 400) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  if (iterations != nullptr) *iterations = it;
  return 0.5 * (a + b);
}

void check_symmetric_grid(const std::vector<double>& p) {
  if (p.size() < 5) throw ConfigError("p grid needs at least 5 nodes");
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (!(p[i + 1] > p[i])) throw ConfigError("p grid must be strictly increasing");
  }
  const double scale = std::max(1.0, p.back());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p[i] + p[p.size() - 1 - i]) > 1e-12 * scale) {
      throw ConfigError("p grid must be symmetric about 0");
    }
  }
}

}  // namespace

HamiltonianModel::HamiltonianModel(Kind kind, double lipschitz_bound)
    : kind_(std::move(kind)), lipschitz_bound_(lipschitz_bound) {}

HamiltonianModel HamiltonianModel::quadratic(double d) {
  if (!(d > 0.0)) throw ConfigError("quadratic coefficient D must be positive");
  return HamiltonianModel(model::Quadratic{d}, kInf);
}

HamiltonianModel HamiltonianModel::bgk_closed(double v_max, double r) {
  if (!(v_max > 0.0)) throw ConfigError("v_max must be positive");
  if (!(r >= 0.0)) throw ConfigError("growth rate must be >= 0");
  return HamiltonianModel(model::BGKClosed{v_max, r}, v_max);
}

HamiltonianModel HamiltonianModel::vfp(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  return HamiltonianModel(model::VFP{sigma}, kInf);
}

HamiltonianModel HamiltonianModel::nonlocal_gaussian() {
  return HamiltonianModel(model::NonlocalGaussian{}, kInf);
}

HamiltonianModel HamiltonianModel::nonlocal_laplace() {
  return HamiltonianModel(model::NonlocalLaplace{}, kInf);
}

HamiltonianModel HamiltonianModel::tabulated(std::vector<double> p, std::vector<double> h,
                                             double lipschitz_bound, double v_max) {
  if (p.size() != h.size()) throw ConfigError("tabulated H: p and H lengths differ");
  check_symmetric_grid(p);
  model::Tabulated tab;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    tab.measured_lipschitz =
        std::max(tab.measured_lipschitz, std::abs((h[i + 1] - h[i]) / (p[i + 1] - p[i])));
  }
  tab.p = p;
  tab.h = h;
  tab.v_max = v_max;
  tab.interp = std::make_shared<model::Tabulated::Interpolant>(
      model::Tabulated::Interpolant{{std::move(p), std::move(h)}});
  return HamiltonianModel(std::move(tab), lipschitz_bound);
}

double HamiltonianModel::eval(double p) const {
  return std::visit(
      overloaded{
          [&](const model::Quadratic& m) { return m.d * p * p; },
          [&](const model::BGKClosed& m) {
            const double s = 1.0 + m.r;
            return s * xcoth_minus_one(m.v_max * p / s);
          },
          [&](const model::VFP& m) { return std::pow(m.sigma, 4) * p * p; },
          [&](const model::NonlocalGaussian&) { return std::expm1(0.5 * p * p); },
          [&](const model::NonlocalLaplace&) {
            if (!(std::abs(p) < 1.0)) {
              throw ConfigError(fmt::format("Laplace-kernel H undefined at |p| = {} >= 1", p));
            }
            return p * p / (1.0 - p * p);
          },
          [&](const model::Tabulated& m) {
            if (p < m.p.front() || p > m.p.back()) {
              throw ConfigError(fmt::format("p = {} outside the tabulated range [{}, {}]", p,
                                            m.p.front(), m.p.back()));
            }
            return m.interp->spline(p);
          },
      },
      kind_);
}

double HamiltonianModel::deriv(double p) const {
  return std::visit(
      overloaded{
          [&](const model::Quadratic& m) { return 2.0 * m.d * p; },
          [&](const model::BGKClosed& m) {
            return m.v_max * xcoth_prime(m.v_max * p / (1.0 + m.r));
          },
          [&](const model::VFP& m) { return 2.0 * std::pow(m.sigma, 4) * p; },
          [&](const model::NonlocalGaussian&) { return p * std::exp(0.5 * p * p); },
          [&](const model::NonlocalLaplace&) {
            if (!(std::abs(p) < 1.0)) {
              throw ConfigError(fmt::format("Laplace-kernel H undefined at |p| = {} >= 1", p));
            }
            const double d = 1.0 - p * p;
            return 2.0 * p / (d * d);
          },
          [&](const model::Tabulated& m) {
            if (p < m.p.front() || p > m.p.back()) {
              throw ConfigError(fmt::format("p = {} outside the tabulated range [{}, {}]", p,
                                            m.p.front(), m.p.back()));
            }
            return m.interp->spline.prime(p);
          },
      },
      kind_);
}

std::pair<double, double> HamiltonianModel::domain() const {
  if (std::holds_alternative<model::NonlocalLaplace>(kind_)) return {-1.0 + 1e-9, 1.0 - 1e-9};
  if (const auto* t = std::get_if<model::Tabulated>(&kind_)) return {t->p.front(), t->p.back()};
  return {-kInf, kInf};
}

double HamiltonianModel::slope_bound(double p_range) const {
  const double top = std::min(std::abs(p_range), domain().second);
  double s = 0.0;
  constexpr int kSamples = 4000;
  for (int i = 0; i <= kSamples; ++i) {
    s = std::max(s, std::abs(deriv(top * i / kSamples)));
  }
  return std::min(s, lipschitz_bound_);
}

std::string HamiltonianModel::name() const {
  return std::visit(overloaded{
                        [](const model::Quadratic&) { return std::string("quadratic"); },
                        [](const model::BGKClosed&) { return std::string("bgk-closed"); },
                        [](const model::VFP&) { return std::string("vfp"); },
                        [](const model::NonlocalGaussian&) {
                          return std::string("nonlocal-gaussian");
                        },
                        [](const model::NonlocalLaplace&) {
                          return std::string("nonlocal-laplace");
                        },
                        [](const model::Tabulated&) { return std::string("tabulated"); },
                    },
                    kind_);
}

std::vector<double> symmetric_grid(double p_max, double dp) {
  if (!(p_max > 0.0) || !(dp > 0.0)) throw ConfigError("p range and step must be positive");
  const int half = std::max(2, static_cast<int>(std::ceil(p_max / dp - 1e-9)));
  std::vector<double> p(2 * half + 1);
  for (int k = -half; k <= half; ++k) p[k + half] = p_max * k / half;
  return p;
}

HamiltonianModel tabulate(const DiscreteOperator& op, const std::vector<double>& p_grid) {
  check_symmetric_grid(p_grid);
  std::vector<double> h(p_grid.size());
  parallel_for(p_grid.size(), [&](std::size_t i) {
    try {
      h[i] = solve_direct(op, p_grid[i]).h_value;
    } catch (const std::exception& e) {
      throw SolverError(fmt::format("tabulate failed at p = {}: {}", p_grid[i], e.what()));
    }
  });
  return HamiltonianModel::tabulated(p_grid, std::move(h), op.grid.v_max, op.grid.v_max);
}

SpeedResult min_wave_speed(const HamiltonianModel& model, double r) {
  if (!(r > 0.0)) throw ConfigError("minimal speed requires a growth rate r > 0");
  auto g = [&](double p) { return (model.eval(p) + r) / p; };
  constexpr double p_lo = 1e-6;
  const double edge = model.domain().second;
  double p_hi;
  if (model.is_tabulated()) {
    p_hi = edge;
  } else {
    p_hi = std::min(1.0, edge);
    for (int k = 0; k < 40 && p_hi < edge; ++k) {
      const double next = std::min(2.0 * p_hi, edge);
      // Strict: a plateau (g rounding to its infimum) keeps doubling.
      if (g(next) > g(p_hi)) {
        p_hi = next;
        break;
      }
      p_hi = next;
    }
  }
  constexpr int kScan = 4000;
  int best = 0;
  double best_g = kInf;
  for (int i = 0; i <= kScan; ++i) {
    const double p = p_lo + (p_hi - p_lo) * i / kScan;
    const double v = g(p);
    if (v <= best_g) {  // ties go right so a plateau reaches the horizon
      best_g = v;
      best = i;
    }
  }
  SpeedResult res;
  if (best == kScan) {
    res.at_horizon = true;
    res.p_star = p_hi;
    res.c_star = best_g;
    return res;
  }
  const double step = (p_hi - p_lo) / kScan;
  const double a = std::max(p_lo, p_lo + step * (best - 1));
  const double b = p_lo + step * (best + 1);
  res.p_star = golden_max([&](double p) { return -g(p); }, a, b, 1e-10, &res.iterations);
  res.c_star = g(res.p_star);
  return res;
}

double lagrangian(const HamiltonianModel& model, double r, double q) {
  const double sign = q < 0.0 ? -1.0 : 1.0;
  const double aq = std::abs(q);
  auto objective = [&](double p) { return p * aq - model.eval(sign * p) - r; };
  const double edge = model.domain().second;
  const bool fixed_range = model.is_tabulated() || std::isfinite(edge);
  double p_max = model.is_tabulated() ? edge : std::min(1.0, edge);
  constexpr int kScan = 2000;
  for (int attempt = 0; attempt < 40; ++attempt) {
    int best = 0;
    double best_v = -kInf;
    for (int i = 0; i <= kScan; ++i) {
      const double v = objective(p_max * i / kScan);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    if (best < kScan) {
      const double step = p_max / kScan;
      const double a = std::max(0.0, step * (best - 1));
      const double b = step * (best + 1);
      const double p = golden_max(objective, a, b, 1e-12);
      return std::max(best_v, objective(p));
    }
    if (fixed_range && p_max >= edge) break;
    p_max = std::min(2.0 * p_max, edge);
  }
  return kInf;
}

LegendreResult legendre(const HamiltonianModel& model, double r,
                        const std::vector<double>& q_grid) {
  LegendreResult res;
  res.values.resize(q_grid.size());
  for (std::size_t i = 0; i < q_grid.size(); ++i) res.values[i] = lagrangian(model, r, q_grid[i]);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    if (q_grid[i] >= 0.0) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return q_grid[a] < q_grid[b]; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    if (res.values[i] < 0.0) continue;
    if (k == 0 || res.values[i] == 0.0) {
      res.zero_crossing = q_grid[i];
      break;
    }
    double lo = q_grid[order[k - 1]];
    double hi = q_grid[i];
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (lagrangian(model, r, mid) < 0.0 ? lo : hi) = mid;
    }
    res.zero_crossing = 0.5 * (lo + hi);
    break;
  }
  return res;
}

std::vector<double> hopf_lax_solution(const HamiltonianModel& model, double r, double t,
                                      const std::vector<double>& x_grid) {
  if (!(t > 0.0)) throw ConfigError("Hopf-Lax evaluation needs t > 0");
  std::vector<double> q(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) q[i] = x_grid[i] / t;
  const LegendreResult l = legendre(model, r, q);
  std::vector<double> phi(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) phi[i] = std::max(t * l.values[i], 0.0);
  return phi;
}

void write_hamiltonian_csv(const std::string& path, const HamiltonianModel& model,
                           const std::vector<double>& p_grid, const Metadata& metadata) {
  Metadata meta = metadata;
  meta.emplace_back("model", model.name());
  meta.emplace_back("lipschitz_bound", format_number(model.lipschitz_bound()));
  if (const auto* t = std::get_if<model::Tabulated>(&model.kind())) {
    meta.emplace_back("measured_lipschitz", format_number(t->measured_lipschitz));
    if (t->v_max > 0.0) meta.emplace_back("v_max", format_number(t->v_max));
  }
  CsvWriter out(path, {"p", "H", "dH"}, meta);
  for (double p : p_grid) out.row({p, model.eval(p), model.deriv(p)});
}

HamiltonianModel read_hamiltonian_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  double lip = kInf;
  double v_max = 0.0;
  if (auto it = table.metadata.find("lipschitz_bound"); it != table.metadata.end()) {
    lip = std::stod(it->second);
  }
  if (auto it = table.metadata.find("v_max"); it != table.metadata.end()) {
    v_max = std::stod(it->second);
  }
  return HamiltonianModel::tabulated(table.column("p"), table.column("H"), lip, v_max);
}

}  // namespace kfront
