#include "kfront/hj_solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kfront/errors.hpp"

namespace kfront {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMaxCfl = 0.9;

void check_options(const HJOptions& o) {
  if (!(o.dx > 0.0)) throw ConfigError("dx must be positive");
  if (!(o.x_max >= 2.0 * o.dx)) throw ConfigError("x_max must cover at least two cells");
  if (!(o.cfl > 0.0) || o.cfl > kMaxCfl) throw ConfigError("cfl must lie in (0, 0.9]");
  if (o.sample_dt < 0.0) throw ConfigError("sample_dt must be >= 0");
}

// Godunov is exact only for H even and nondecreasing in |p|; reject tables that are not.
void check_godunov_admissible(const HamiltonianModel& model) {
  const auto* t = std::get_if<model::Tabulated>(&model.kind());
  if (t == nullptr) return;
  for (std::size_t i = 0; i + 1 < t->p.size(); ++i) {
    if (t->p[i] >= 0.0 && t->h[i + 1] < t->h[i] - 1e-12) {
      throw ConfigError("Godunov flux needs H nondecreasing in |p|; use Lax-Friedrichs");
    }
  }
}

double numerical_h(const HJField& f, double a, double b) {
  if (f.flux == NumericalFlux::Godunov) {
    return f.model->eval(std::max(std::max(a, 0.0), -std::min(b, 0.0)));
  }
  return f.model->eval(0.5 * (a + b)) - 0.5 * f.alpha * (b - a);
}

}  // namespace

const char* to_string(NumericalFlux flux) {
  return flux == NumericalFlux::Godunov ? "godunov" : "lax-friedrichs";
}

Profile point_cone(double slope, double cap) {
  if (!(slope > 0.0) || !(cap > 0.0)) throw ConfigError("cone slope and cap must be positive");
  return [slope, cap](double x) { return std::min(slope * std::abs(x), cap); };
}

double auto_x_max(double c_star, double t_final) { return 1.5 * c_star * t_final + 2.0; }

HJField make_hj_field(std::shared_ptr<const HamiltonianModel> model, double r, bool constrained,
                      const Profile& phi0, const HJOptions& options) {
  check_options(options);
  if (!model) throw ConfigError("missing Hamiltonian model");
  if (!(r >= 0.0)) throw ConfigError("growth rate must be >= 0");
  if (options.flux == NumericalFlux::Godunov) check_godunov_admissible(*model);
  HJField f;
  const long m = std::lround(options.x_max / options.dx);
  f.dx = options.dx;
  f.x_max = m * options.dx;
  f.x.resize(2 * m + 1);
  f.phi.resize(2 * m + 1);
  for (long i = -m; i <= m; ++i) {
    const double x = options.dx * static_cast<double>(i);
    const double v = phi0(x);
    if (!std::isfinite(v) || v < 0.0) {
      throw ConfigError(fmt::format("initial phase must be finite and >= 0 (x = {})", x));
    }
    f.x[i + m] = x;
    f.phi[i + m] = v;
  }
  double slope = 0.0;
  for (std::size_t i = 0; i + 1 < f.phi.size(); ++i) {
    slope = std::max(slope, std::abs(f.phi[i + 1] - f.phi[i]) / f.dx);
  }
  const double table_edge = model->domain().second;
  if (model->is_tabulated() && slope > table_edge) {
    throw ConfigError(fmt::format(
        "initial slope {} exceeds the tabulated p range {}; widen the table", slope, table_edge));
  }
  f.slope_limit = slope * (1.0 + 1e-9) + 1e-12;
  f.alpha = options.alpha > 0.0 ? options.alpha : model->slope_bound(slope);
  f.dt = options.cfl * f.dx / std::max(f.alpha, 1e-12);
  f.r = r;
  f.constrained = constrained;
  f.flux = options.flux;
  f.model = std::move(model);
  return f;
}

void step(HJField& f, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (dt * f.alpha > kMaxCfl * f.dx * (1.0 + 1e-12)) {
    throw ConfigError(fmt::format("CFL violation: dt * alpha / dx = {} > {}", dt * f.alpha / f.dx,
                                  kMaxCfl));
  }
  const std::size_t n = f.phi.size();
  std::vector<double> slope(n - 1);
  double steepest = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    slope[i] = (f.phi[i + 1] - f.phi[i]) / f.dx;
    steepest = std::max(steepest, std::abs(slope[i]));
  }
  if (steepest > f.slope_limit * (1.0 + 1e-6)) {
    throw SolverError(fmt::format(
        "gradient {} left the range {} used to size alpha", steepest, f.slope_limit));
  }
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Outflow ghosts repeat the adjacent interior slope.
    const double a = i == 0 ? slope[0] : slope[i - 1];
    const double b = i + 1 == n ? slope[n - 2] : slope[i];
    double v = f.phi[i] - dt * (numerical_h(f, a, b) + f.r);
    if (f.constrained) v = std::max(v, 0.0);
    next[i] = v;
  }
  f.phi.swap(next);
  f.time += dt;
}

double front_position(const HJField& f, double zero_tol) {
  std::size_t idx = f.phi.size();
  for (std::size_t i = f.phi.size(); i-- > 0;) {
    if (f.phi[i] < zero_tol) {
      idx = i;
      break;
    }
  }
  if (idx == f.phi.size()) return kNaN;
  if (idx + 1 == f.phi.size()) return f.x[idx];
  const double lo = f.phi[idx];
  const double hi = f.phi[idx + 1];
  return f.x[idx] + f.dx * (zero_tol - lo) / (hi - lo);
}

double fit_speed(const std::vector<double>& t, const std::vector<double>& x, double t_from) {
  double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_from || !std::isfinite(x[i])) continue;
    st += t[i];
    sx += x[i];
    stt += t[i] * t[i];
    stx += t[i] * x[i];
    ++n;
  }
  if (n < 2) return kNaN;
  const double denom = n * stt - st * st;
  if (denom <= 0.0) return kNaN;
  return (n * stx - st * sx) / denom;
}

HJRun run(std::shared_ptr<const HamiltonianModel> model, double r, bool constrained,
          const Profile& phi0, double t_final, const HJOptions& options) {
  if (!(t_final > 0.0)) throw ConfigError("final time must be positive");
  HJRun out;
  out.field = make_hj_field(std::move(model), r, constrained, phi0, options);
  HJField& f = out.field;
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / f.dt - 1e-9)));
  const double dt = t_final / static_cast<double>(steps);

  std::vector<double> pending = options.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snap = 0;
  auto take_snapshots = [&] {
    while (next_snap < pending.size() && pending[next_snap] <= f.time + 0.5 * dt) {
      out.snapshots.push_back({f.time, f.phi});
      ++next_snap;
    }
  };
  double next_sample = 0.0;
  auto sample_front = [&](bool force) {
    if (!force && f.time + 1e-12 < next_sample) return;
    out.front.times.push_back(f.time);
    out.front.front_positions.push_back(front_position(f, options.zero_tol));
    next_sample = f.time + options.sample_dt;
  };

  take_snapshots();
  sample_front(true);
  for (long k = 1; k <= steps; ++k) {
    step(f, dt);
    if (k == steps) f.time = t_final;
    take_snapshots();
    sample_front(k == steps);
  }

  out.front.fitted_speed = fit_speed(out.front.times, out.front.front_positions, 0.5 * t_final);
  out.front.predicted_c_star = kNaN;
  out.front.relative_error = kNaN;
  if (constrained && r > 0.0) {
    const SpeedResult s = min_wave_speed(*f.model, r);
    out.front.predicted_c_star = s.c_star;
    out.front.relative_error = (out.front.fitted_speed - s.c_star) / s.c_star;
  }
  return out;
}

double compare_hopf_lax(const HJField& f, const HamiltonianModel& model, double r) {
  if (!(f.time > 0.0)) throw ConfigError("Hopf-Lax comparison needs t > 0");
  std::vector<double> xs;
  std::vector<double> phi;
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    if (std::abs(f.x[i]) <= 0.8 * f.x_max + 1e-12) {
      xs.push_back(f.x[i]);
      phi.push_back(f.phi[i]);
    }
  }
  const std::vector<double> ref = hopf_lax_solution(model, r, f.time, xs);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::isfinite(ref[i])) worst = std::max(worst, std::abs(phi[i] - ref[i]));
  }
  return worst;
}

void write_snapshots_csv(const std::string& path, const HJRun& run, const Metadata& metadata) {
  CsvWriter out(path, {"t", "x", "phi"}, metadata);
  for (const auto& s : run.snapshots) {
    for (std::size_t i = 0; i < s.phi.size(); ++i) out.row({s.time, run.field.x[i], s.phi[i]});
  }
}

void write_front_csv(const std::string& path, const HJRun& run, const Metadata& metadata) {
  Metadata meta = metadata;
  meta.emplace_back("model", run.field.model->name());
  meta.emplace_back("r", format_number(run.field.r));
  meta.emplace_back("dx", format_number(run.field.dx));
  meta.emplace_back("flux", to_string(run.field.flux));
  meta.emplace_back("fitted_speed", format_number(run.front.fitted_speed));
  meta.emplace_back("predicted_c_star", format_number(run.front.predicted_c_star));
  CsvWriter out(path, {"t", "front_x"}, meta);
  for (std::size_t i = 0; i < run.front.times.size(); ++i) {
    out.row({run.front.times[i], run.front.front_positions[i]});
  }
}

HJ2DResult run_2d(const HamiltonianModel& model, double r, const Profile& phi0_radial,
                  double t_final, const HJOptions& options) {
  check_options(options);
  if (!(t_final > 0.0)) throw ConfigError("final time must be positive");
  const long m = std::lround(options.x_max / options.dx);
  const std::size_t n = static_cast<std::size_t>(2 * m + 1);
  const double dx = options.dx;
  HJ2DResult res;
  res.x.resize(n);
  for (long i = -m; i <= m; ++i) res.x[i + m] = dx * static_cast<double>(i);
  std::vector<double> phi(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) phi[j * n + i] = phi0_radial(std::hypot(res.x[i], res.x[j]));
  }
  double slope = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      slope = std::max(slope, std::abs(phi[j * n + i + 1] - phi[j * n + i]) / dx);
      slope = std::max(slope, std::abs(phi[(i + 1) * n + j] - phi[i * n + j]) / dx);
    }
  }
  const double alpha =
      options.alpha > 0.0 ? options.alpha : model.slope_bound(std::sqrt(2.0) * slope);
  const long steps = std::max(
      1L, static_cast<long>(std::ceil(t_final * 2.0 * alpha / (options.cfl * dx) - 1e-9)));
  const double dt = t_final / static_cast<double>(steps);

  auto upwind = [&](double a, double b) { return std::max(std::max(a, 0.0), -std::min(b, 0.0)); };
  std::vector<double> next(n * n);
  for (long k = 0; k < steps; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = j * n + i;
        const std::size_t il = i == 0 ? 1 : i - 1;
        const std::size_t ir = i + 1 == n ? n - 2 : i + 1;
        const std::size_t jl = j == 0 ? 1 : j - 1;
        const std::size_t jr = j + 1 == n ? n - 2 : j + 1;
        // Mirrored ghosts: outflow copy of the adjacent slope.
        const double ax = i == 0 ? (phi[j * n + ir] - phi[c]) / dx : (phi[c] - phi[j * n + il]) / dx;
        const double bx = i + 1 == n ? (phi[c] - phi[j * n + il]) / dx : (phi[j * n + ir] - phi[c]) / dx;
        const double ay = j == 0 ? (phi[jr * n + i] - phi[c]) / dx : (phi[c] - phi[jl * n + i]) / dx;
        const double by = j + 1 == n ? (phi[c] - phi[jl * n + i]) / dx : (phi[jr * n + i] - phi[c]) / dx;
        const double g = std::hypot(upwind(ax, bx), upwind(ay, by));
        next[c] = std::max(phi[c] - dt * (model.eval(g) + r), 0.0);
      }
    }
    phi.swap(next);
  }
  res.time = t_final;
  const std::size_t mid = static_cast<std::size_t>(m);
  const double tol = options.zero_tol;
  auto radius_along = [&](auto index, double spacing) {
    std::size_t last = 0;
    for (std::size_t k = 0; k <= mid; ++k) {
      if (phi[index(k)] < tol) last = k;
    }
    if (last == mid) return spacing * static_cast<double>(mid);
    const double lo = phi[index(last)];
    const double hi = phi[index(last + 1)];
    return spacing * (static_cast<double>(last) + (tol - lo) / (hi - lo));
  };
  res.radius_axis = radius_along([&](std::size_t k) { return mid * n + mid + k; }, dx);
  res.radius_diagonal =
      radius_along([&](std::size_t k) { return (mid + k) * n + mid + k; }, dx * std::sqrt(2.0));
  res.phi = std::move(phi);
  return res;
}

}  // namespace kfront
