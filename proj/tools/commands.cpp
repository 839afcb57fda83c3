#include "commands.hpp"

#include <fmt/format.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <tuple>

#include "kfront/csv.hpp"
#include "kfront/errors.hpp"
#include "kfront/hamiltonian.hpp"
#include "kfront/hj_solver.hpp"
#include "kfront/kinetic_solver.hpp"
#include "kfront/operators.hpp"
#include "kfront/spectral.hpp"
#include "kfront/unbounded_models.hpp"
#include "kfront/velocity_space.hpp"

namespace kfront::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> kOperatorModels = {"bgk", "kernel", "elliptic"};
const std::set<std::string> kModels = {"bgk",      "kernel",  "elliptic",          "quadratic",
                                       "vfp",      "table",   "nonlocal-gaussian", "nonlocal-laplace"};

bool is_operator_model(const std::string& m) { return kOperatorModels.count(m) > 0; }

int velocity_count(const RunConfig& cfg) {
  if (cfg.n > 0) return cfg.n;
  return (cfg.command == "kinetic" || cfg.command == "converge") ? 32 : 201;
}

QuadratureRule rule_for(const RunConfig& cfg) {
  if (cfg.quadrature == "midpoint") return QuadratureRule::Midpoint;
  if (cfg.quadrature == "gauss") return QuadratureRule::GaussLegendre;
  return cfg.model == "elliptic" ? QuadratureRule::Midpoint : QuadratureRule::GaussLegendre;
}

std::shared_ptr<const DiscreteOperator> make_operator(const RunConfig& cfg) {
  const int n = velocity_count(cfg);
  const VelocityGrid grid = make_grid(cfg.v_max, n, rule_for(cfg));
  const Equilibrium m = uniform_equilibrium(grid);
  if (cfg.model == "bgk") return std::make_shared<const DiscreteOperator>(build_bgk(grid, m, cfg.r));
  if (cfg.model == "kernel") {
    return std::make_shared<const DiscreteOperator>(
        build_kernel(grid, load_kernel_csv(cfg.kernel_csv, n), cfg.r, m));
  }
  if (cfg.model == "elliptic") {
    return std::make_shared<const DiscreteOperator>(
        build_elliptic(grid, Eigen::VectorXd::Constant(n, cfg.diffusivity), cfg.r, m));
  }
  throw ConfigError(fmt::format("model '{}' is not a velocity operator", cfg.model));
}

std::shared_ptr<const HamiltonianModel> make_model(const RunConfig& cfg) {
  if (cfg.model == "quadratic") return std::make_shared<HamiltonianModel>(HamiltonianModel::quadratic(cfg.d));
  if (cfg.model == "vfp") return std::make_shared<HamiltonianModel>(HamiltonianModel::vfp(cfg.sigma));
  if (cfg.model == "nonlocal-gaussian") {
    return std::make_shared<HamiltonianModel>(HamiltonianModel::nonlocal_gaussian());
  }
  if (cfg.model == "nonlocal-laplace") {
    return std::make_shared<HamiltonianModel>(HamiltonianModel::nonlocal_laplace());
  }
  if (cfg.model == "table") return std::make_shared<HamiltonianModel>(read_hamiltonian_csv(cfg.table));
  if (cfg.model == "bgk" && !cfg.discrete) {
    return std::make_shared<HamiltonianModel>(HamiltonianModel::bgk_closed(cfg.v_max, cfg.r));
  }
  const auto op = make_operator(cfg);
  return std::make_shared<HamiltonianModel>(tabulate(*op, symmetric_grid(cfg.p_max, cfg.dp)));
}

Profile shifted_ramp(const RunConfig& cfg) {
  const double a = cfg.phi0_offset;
  const double cap = cfg.phi0_cap;
  return [a, cap](double x) { return std::min(std::max(std::abs(x) - a, 0.0), cap); };
}

// True when the command builds the discrete velocity operator.
bool uses_operator(const RunConfig& cfg) {
  if (!is_operator_model(cfg.model)) return false;
  const std::string& c = cfg.command;
  return c == "kinetic" || c == "converge" || c == "hamiltonian" || cfg.discrete || cfg.model != "bgk";
}

Metadata metadata(const RunConfig& cfg) {
  Metadata m = {{"command", cfg.command}, {"model", cfg.model}};
  if (is_operator_model(cfg.model)) m.emplace_back("v_max", format_number(cfg.v_max));
  if (uses_operator(cfg)) {
    m.emplace_back("N", std::to_string(velocity_count(cfg)));
    m.emplace_back("quadrature", rule_for(cfg) == QuadratureRule::Midpoint ? "midpoint" : "gauss");
  }
  m.emplace_back("r", format_number(cfg.r));
  return m;
}

std::string out_path(const RunConfig& cfg, Manifest& manifest, const std::string& name) {
  std::filesystem::create_directories(cfg.out);
  manifest.file(name);
  return (std::filesystem::path(cfg.out) / name).string();
}

void write_summary(const RunConfig& cfg, Manifest& manifest, const std::vector<std::string>& cols,
                   const std::vector<double>& values) {
  CsvWriter w(out_path(cfg, manifest, "summary.csv"), cols, metadata(cfg));
  w.row(values);
}

KineticOptions kinetic_options(const RunConfig& cfg) {
  KineticOptions o;
  o.dx = cfg.dx;
  o.cfl = cfg.cfl;
  o.x_max = cfg.x_max > 0.0 ? cfg.x_max : 3.0;
  o.snapshot_times = cfg.snapshots;
  return o;
}

double opt(const std::optional<double>& v) { return v ? *v : kNaN; }

int cmd_hamiltonian(const RunConfig& cfg, Manifest& manifest) {
  const std::vector<double> grid = symmetric_grid(cfg.p_max, cfg.dp);
  std::shared_ptr<const HamiltonianModel> model;
  if (is_operator_model(cfg.model)) {
    model = std::make_shared<HamiltonianModel>(tabulate(*make_operator(cfg), grid));
  } else {
    model = make_model(cfg);
  }
  Metadata meta = metadata(cfg);
  write_hamiltonian_csv(out_path(cfg, manifest, "hamiltonian.csv"), *model, grid, meta);
  std::vector<double> h(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) h[i] = model->eval(grid[i]);
  const ConvexityReport conv = convexity_diagnostic(grid, h);
  double measured = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    measured = std::max(measured, std::abs((h[i + 1] - h[i]) / (grid[i + 1] - grid[i])));
  }
  write_summary(cfg, manifest,
                {"points", "measured_lipschitz", "lipschitz_bound", "min_second_difference",
                 "convex_on_grid"},
                {static_cast<double>(grid.size()), measured, model->lipschitz_bound(),
                 conv.min_second_difference, conv.convex_on_grid ? 1.0 : 0.0});
  fmt::print("{}: {} points on [-{}, {}], measured Lipschitz {:.6g}\n", model->name(), grid.size(),
             cfg.p_max, cfg.p_max, measured);
  return 0;
}

int cmd_speed(const RunConfig& cfg, Manifest& manifest) {
  const auto model = make_model(cfg);
  const SpeedResult s = min_wave_speed(*model, cfg.r);
  write_summary(cfg, manifest, {"c_star", "p_star", "at_horizon", "iterations"},
                {s.c_star, s.p_star, s.at_horizon ? 1.0 : 0.0, static_cast<double>(s.iterations)});
  fmt::print("{}: c* = {:.10g} at p* = {:.10g}{}\n", model->name(), s.c_star, s.p_star,
             s.at_horizon ? " (infimum at the search horizon)" : "");
  return 0;
}

int cmd_hj(const RunConfig& cfg, Manifest& manifest) {
  const auto model = make_model(cfg);
  double c_star = kNaN;
  double slope = cfg.cone_slope;
  if (cfg.r > 0.0) {
    const SpeedResult s = min_wave_speed(*model, cfg.r);
    c_star = s.c_star;
    if (slope <= 0.0) slope = 4.0 * s.p_star;
  }
  if (slope <= 0.0) slope = 4.0;
  if (cfg.cone_slope <= 0.0 && model->is_tabulated()) {
    slope = std::min(slope, 0.95 * model->domain().second);
  }
  HJOptions o;
  o.dx = cfg.dx;
  o.cfl = cfg.cfl;
  o.flux = cfg.flux == "lax-friedrichs" ? NumericalFlux::LaxFriedrichs : NumericalFlux::Godunov;
  o.x_max = cfg.x_max > 0.0 ? cfg.x_max : (std::isfinite(c_star) ? auto_x_max(c_star, cfg.t_final) : 8.0);
  o.snapshot_times = cfg.snapshots;
  const HJRun res = run(model, cfg.r, !cfg.unconstrained, point_cone(slope), cfg.t_final, o);
  Metadata meta = metadata(cfg);
  meta.emplace_back("hamiltonian", model->name());
  meta.emplace_back("flux", to_string(o.flux));
  meta.emplace_back("dx", format_number(o.dx));
  meta.emplace_back("cone_slope", format_number(slope));
  write_front_csv(out_path(cfg, manifest, "front.csv"), res, meta);
  if (!cfg.snapshots.empty()) write_snapshots_csv(out_path(cfg, manifest, "snapshots.csv"), res, meta);
  const double hl = cfg.hopf_lax ? compare_hopf_lax(res.field, *model, cfg.r) : kNaN;
  write_summary(cfg, manifest, {"fitted_speed", "c_star", "relative_error", "hopf_lax_gap"},
                {res.front.fitted_speed, c_star, res.front.relative_error, hl});
  fmt::print("{}: fitted front speed {:.6g}, c* = {:.6g}, relative error {:.3e}\n", model->name(),
             res.front.fitted_speed, c_star, res.front.relative_error);
  if (cfg.hopf_lax) fmt::print("Hopf-Lax discrepancy {:.4g}\n", hl);
  return 0;
}

int cmd_kinetic(const RunConfig& cfg, Manifest& manifest) {
  const auto op = make_operator(cfg);
  const double eps = cfg.eps_list.front();
  KineticOptions o = kinetic_options(cfg);
  if (std::find(o.snapshot_times.begin(), o.snapshot_times.end(), cfg.t_final) == o.snapshot_times.end()) {
    o.snapshot_times.push_back(cfg.t_final);
  }
  const Profile phi0 = shifted_ramp(cfg);
  const KineticRun res = run_kinetic(op, eps, phi0, cfg.t_final, o);
  const HJRun ref = hj_reference(op, phi0, cfg.t_final, o);
  const double gap = phase_gap(res.field, res.phase, ref.field);
  const RegionDiagnostics reg = region_diagnostics(res.field, res.phase, ref.field);
  Metadata meta = metadata(cfg);
  meta.emplace_back("epsilon", format_number(eps));
  meta.emplace_back("dx", format_number(o.dx));
  write_kinetic_snapshots_csv(out_path(cfg, manifest, "kinetic_snapshots.csv"), res, meta);
  {
    CsvWriter w(out_path(cfg, manifest, "estimates.csv"), {"t", "max_grad_v_phi"}, meta);
    for (std::size_t i = 0; i < res.estimates.sample_times.size(); ++i) {
      w.row({res.estimates.sample_times[i], res.estimates.grad_v_curve[i]});
    }
  }
  const PhaseEstimates& e = res.estimates;
  write_summary(cfg, manifest,
                {"eps", "gap", "min_rho_nullset", "max_f_positive", "max_phi", "phi0_max",
                 "max_dt_phi", "v_max_times_phi0_slope", "max_grad_x_phi", "max_bound_violation"},
                {eps, gap, opt(reg.min_rho_nullset), opt(reg.max_f_positive_set), e.max_phi,
                 e.phi0_max, e.max_dt_phi, e.v_max * e.phi0_max_slope, e.max_grad_x_phi,
                 res.field.max_bound_violation});
  fmt::print("eps = {}: gap to HJ limit {:.4g}, {} steps of {:.4g}\n", eps, gap, res.steps, res.dt);
  return 0;
}

int cmd_converge(const RunConfig& cfg, Manifest& manifest) {
  const auto op = make_operator(cfg);
  const KineticOptions o = kinetic_options(cfg);
  const Profile phi0 = shifted_ramp(cfg);
  const HJRun ref = hj_reference(op, phi0, cfg.t_final, o);
  const ConvergenceStudy study = convergence_study(op, cfg.eps_list, phi0, cfg.t_final, o, ref.field);
  Metadata meta = metadata(cfg);
  meta.emplace_back("dx", format_number(o.dx));
  meta.emplace_back("T", format_number(cfg.t_final));
  write_convergence_csv(out_path(cfg, manifest, "convergence.csv"), study, meta);
  {
    CsvWriter w(out_path(cfg, manifest, "hj_reference.csv"), {"x", "phi"}, meta);
    for (std::size_t i = 0; i < ref.field.x.size(); ++i) w.row({ref.field.x[i], ref.field.phi[i]});
  }
  for (const auto& row : study.rows) {
    fmt::print("eps = {}: gap {:.4g}, min rho on nullset {}, max f/M off nullset {}\n", row.epsilon,
               row.gap, format_number(opt(row.regions.min_rho_nullset)),
               format_number(opt(row.regions.max_f_positive_set)));
  }
  fmt::print("gap strictly decreasing: {}\n", study.gaps_strictly_decreasing ? "yes" : "no");
  return 0;
}

double kolmogorov_residual(const KolmogorovParams& prm, double t, double x, double v) {
  const double h = 1e-4;
  auto f = [&](double tt, double xx, double vv) { return kolmogorov_density(prm, tt, xx, vv); };
  const double dt = (f(t + h, x, v) - f(t - h, x, v)) / (2 * h);
  const double dx = (f(t, x + h, v) - f(t, x - h, v)) / (2 * h);
  const double dvv = (f(t, x, v + h) - 2 * f(t, x, v) + f(t, x, v - h)) / (h * h);
  return dt + v * dx - prm.sigma * dvv;
}

int cmd_kolmogorov(const RunConfig& cfg, Manifest& manifest) {
  const KolmogorovParams prm{cfg.sigma, cfg.w};
  const double t = cfg.t_final;
  Metadata meta = {{"command", cfg.command}, {"sigma", format_number(cfg.sigma)},
                   {"w", format_number(cfg.w)}, {"t", format_number(t)}};
  {
    CsvWriter w(out_path(cfg, manifest, "kolmogorov.csv"), {"t", "x", "v", "density", "phase"}, meta);
    for (int i = -30; i <= 30; ++i) {
      for (int j = -30; j <= 30; ++j) {
        const double x = 0.1 * i;
        const double v = 0.1 * j;
        w.row({t, x, v, kolmogorov_density(prm, t, x, v), kolmogorov_phase(cfg.sigma, t, x, v)});
      }
    }
  }
  {
    CsvWriter w(out_path(cfg, manifest, "phase_min.csv"), {"t", "level_set_x"}, meta);
    for (int k = 1; k <= 40; ++k) {
      const double tk = 0.1 * k;
      w.row({tk, kolmogorov_level_set(cfg.sigma, tk, 1.0)});
    }
  }
  const bool all = cfg.check == "all";
  double residual = kNaN, mass_error = kNaN, phase_error = kNaN;
  bool ok = true;
  if (all || cfg.check == "residual") {
    residual = 0.0;
    for (auto [tt, x, v] : {std::tuple{t, 0.3, -0.2}, std::tuple{0.5 * t, -0.1, 0.6},
                            std::tuple{2.0 * t, 1.5, 1.0}}) {
      residual = std::max(residual, std::abs(kolmogorov_residual(prm, tt, x, v)));
    }
    ok = ok && residual <= 1e-5;
    fmt::print("max PDE residual at 3 points: {:.3e} (limit 1e-5)\n", residual);
  }
  if (all || cfg.check == "mass") {
    using boost::math::quadrature::gauss_kronrod;
    const double inf = std::numeric_limits<double>::infinity();
    auto inner = [&](double x) {
      return gauss_kronrod<double, 61>::integrate(
          [&](double v) { return kolmogorov_density(prm, t, x, v); }, -inf, inf, 15, 1e-12);
    };
    mass_error = std::abs(gauss_kronrod<double, 61>::integrate(inner, -inf, inf, 15, 1e-12) - 1.0);
    ok = ok && mass_error <= 1e-6;
    fmt::print("mass error: {:.3e} (limit 1e-6)\n", mass_error);
  }
  if (all || cfg.check == "phase-min") {
    phase_error = 0.0;
    for (double x : {-2.0, -0.5, 0.3, 1.0, 3.0}) {
      const auto found = boost::math::tools::brent_find_minima(
          [&](double v) { return kolmogorov_phase(cfg.sigma, t, x, v); }, -1e3, 1e3, 52);
      phase_error = std::max(phase_error, std::abs(found.second - kolmogorov_phase_min(cfg.sigma, t, x)));
    }
    ok = ok && phase_error <= 1e-8;
    fmt::print("phase minimum error: {:.3e} (limit 1e-8)\n", phase_error);
  }
  CsvWriter w(out_path(cfg, manifest, "summary.csv"), {"residual", "mass_error", "phase_min_error", "pass"},
              meta);
  w.row({residual, mass_error, phase_error, ok ? 1.0 : 0.0});
  return ok ? 0 : 1;
}

NonlocalKernel nonlocal_kernel(const RunConfig& cfg) {
  if (cfg.kernel == "gaussian") return NonlocalKernel::gaussian();
  if (cfg.kernel == "laplace") return NonlocalKernel::laplace();
  const CsvTable t = read_csv(cfg.kernel_csv);
  return NonlocalKernel::custom(t.column("x"), t.column("K"));
}

int cmd_nonlocal(const RunConfig& cfg, Manifest& manifest) {
  const NonlocalKernel kernel = nonlocal_kernel(cfg);
  const double h = convolution_hamiltonian(kernel, cfg.p);
  const NonlocalEigvec e = nonlocal_eigvec(kernel, cfg.p);
  Metadata meta = {{"command", cfg.command}, {"kernel", kernel.name()}, {"p", format_number(cfg.p)}};
  {
    CsvWriter w(out_path(cfg, manifest, "eigvec.csv"), {"v", "q"}, meta);
    for (std::size_t i = 0; i < e.v.size(); ++i) w.row({e.v[i], e.q[i]});
  }
  {
    CsvWriter w(out_path(cfg, manifest, "fourier.csv"), {"xi", "re", "im"}, meta);
    for (std::size_t i = 0; i < e.xi.size(); ++i) w.row({e.xi[i], e.fourier[i].real(), e.fourier[i].imag()});
  }
  const bool ok = cfg.check != "positivity" || e.min_q >= -1e-6;
  CsvWriter w(out_path(cfg, manifest, "summary.csv"), {"p", "H", "min_q", "max_imag", "mass", "pass"},
              meta);
  w.row({cfg.p, h, e.min_q, e.max_imag, e.mass, ok ? 1.0 : 0.0});
  fmt::print("{} kernel, p = {}: H = {:.10g}, min Q = {:.3e}, mass {:.8f}\n", kernel.name(), cfg.p, h,
             e.min_q, e.mass);
  if (cfg.check == "positivity") fmt::print("positivity (min Q >= -1e-6): {}\n", ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

void require(bool cond, const std::string& reason) {
  if (!cond) throw ConfigError(reason);
}

}  // namespace

void validate(const RunConfig& cfg) {
  require(cfg.r >= 0.0, "growth rate must be >= 0");
  require(kModels.count(cfg.model) > 0, fmt::format("unknown model '{}'", cfg.model));
  require(cfg.v_max > 0.0, "--vmax must be positive");
  require(cfg.n == 0 || cfg.n >= 2, "--N must be at least 2");
  require(cfg.quadrature == "auto" || cfg.quadrature == "gauss" || cfg.quadrature == "midpoint",
          "--quadrature must be auto, gauss or midpoint");
  require(cfg.dx > 0.0, "--dx must be positive");
  require(cfg.t_final > 0.0, "--T must be positive");
  require(cfg.cfl > 0.0 && cfg.cfl <= 0.9, "--cfl must lie in (0, 0.9]");
  require(cfg.x_max >= 0.0, "--x-max must be positive");
  require(cfg.cone_slope >= 0.0, "--cone-slope must be positive");
  require(cfg.p_max > 0.0 && cfg.dp > 0.0, "--p-max and --dp must be positive");
  require(cfg.d > 0.0, "--D must be positive");
  require(cfg.sigma > 0.0, "--sigma must be positive");
  require(cfg.diffusivity > 0.0, "--diffusivity must be positive");
  require(cfg.flux == "godunov" || cfg.flux == "lax-friedrichs", "--flux must be godunov or lax-friedrichs");
  require(cfg.phi0_offset >= 0.0 && cfg.phi0_cap > 0.0, "--phi0-offset must be >= 0 and --phi0-cap > 0");
  for (double s : cfg.snapshots) require(s >= 0.0 && s <= cfg.t_final, "snapshot times must lie in [0, T]");
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
    require(cfg.eps_list[i] > 0.0, "epsilon values must be positive");
    if (i > 0) require(cfg.eps_list[i] < cfg.eps_list[i - 1], "--eps list must be strictly decreasing");
  }
  if (cfg.model == "kernel") require(!cfg.kernel_csv.empty(), "model 'kernel' needs --kernel-csv");
  if (cfg.model == "table") require(!cfg.table.empty(), "model 'table' needs --table");
  if (cfg.model == "elliptic") {
    require(cfg.quadrature != "gauss", "the elliptic operator needs a midpoint grid");
  }

  const std::string& c = cfg.command;
  if (c == "kinetic" || c == "converge") {
    require(is_operator_model(cfg.model), "kinetic runs need --model bgk, kernel or elliptic");
  }
  if (c == "kinetic") require(cfg.eps_list.size() == 1, "kinetic needs a single --eps value");
  if (c == "converge") require(cfg.eps_list.size() >= 2, "converge needs at least two --eps values");
  if (c == "speed") require(cfg.r > 0.0, "minimal speed requires a growth rate r > 0");
  if (c == "kolmogorov") {
    require(cfg.check.empty() || cfg.check == "residual" || cfg.check == "mass" ||
                cfg.check == "phase-min" || cfg.check == "all",
            "--check must be residual, mass, phase-min or all");
  }
  if (c == "nonlocal") {
    require(cfg.kernel == "gaussian" || cfg.kernel == "laplace" || cfg.kernel == "custom",
            "--kernel must be gaussian, laplace or custom");
    if (cfg.kernel == "custom") require(!cfg.kernel_csv.empty(), "custom kernel needs --kernel-csv");
    require(cfg.check.empty() || cfg.check == "positivity", "--check must be positivity");
  }
}

void record_parameters(const RunConfig& cfg, Manifest& m) {
  const std::string& c = cfg.command;
  const bool operator_run = uses_operator(cfg);
  if (c == "kolmogorov") {
    m.param("sigma", cfg.sigma);
    m.param("w", cfg.w);
    m.param("T", cfg.t_final);
    m.param("check", cfg.check);
    return;
  }
  if (c == "nonlocal") {
    m.param("kernel", cfg.kernel);
    if (!cfg.kernel_csv.empty()) m.param("kernel_csv", cfg.kernel_csv);
    m.param("p", cfg.p);
    m.param("check", cfg.check);
    return;
  }
  m.param("model", cfg.model);
  m.param("r", cfg.r);
  if (cfg.model == "quadratic") m.param("D", cfg.d);
  if (cfg.model == "vfp") m.param("sigma", cfg.sigma);
  if (cfg.model == "table") m.param("table", cfg.table);
  if (is_operator_model(cfg.model)) m.param("v_max", cfg.v_max);
  if (operator_run) {
    m.param("N", static_cast<double>(velocity_count(cfg)));
    m.param("quadrature", rule_for(cfg) == QuadratureRule::Midpoint ? "midpoint" : "gauss");
    if (cfg.model == "kernel") m.param("kernel_csv", cfg.kernel_csv);
    if (cfg.model == "elliptic") m.param("diffusivity", cfg.diffusivity);
  }
  if (c == "hamiltonian" || (operator_run && (c == "speed" || c == "hj"))) {
    m.param("p_max", cfg.p_max);
    m.param("dp", cfg.dp);
  }
  if (c == "hj" || c == "kinetic" || c == "converge") {
    m.param("dx", cfg.dx);
    m.param("T", cfg.t_final);
    m.param("cfl", cfg.cfl);
    m.param("x_max", cfg.x_max);
  }
  if (c == "hj") {
    m.param("flux", cfg.flux);
    m.param("cone_slope", cfg.cone_slope);
    m.param("constrained", cfg.unconstrained ? "no" : "yes");
  }
  if (c == "kinetic" || c == "converge") {
    std::string eps;
    for (double e : cfg.eps_list) eps += (eps.empty() ? "" : ";") + format_number(e);
    m.param("eps", eps);
    m.param("phi0_offset", cfg.phi0_offset);
    m.param("phi0_cap", cfg.phi0_cap);
  }
}

int run_command(const RunConfig& cfg, Manifest& manifest) {
  const std::string& c = cfg.command;
  if (c == "hamiltonian") return cmd_hamiltonian(cfg, manifest);
  if (c == "speed") return cmd_speed(cfg, manifest);
  if (c == "hj") return cmd_hj(cfg, manifest);
  if (c == "kinetic") return cmd_kinetic(cfg, manifest);
  if (c == "converge") return cmd_converge(cfg, manifest);
  if (c == "kolmogorov") return cmd_kolmogorov(cfg, manifest);
  if (c == "nonlocal") return cmd_nonlocal(cfg, manifest);
  throw ConfigError(fmt::format("unknown command '{}'", c));
}

}  // namespace kfront::cli
