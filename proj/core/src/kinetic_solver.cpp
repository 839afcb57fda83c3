#include "kfront/kinetic_solver.hpp"

#include <fmt/format.h>

#include <Eigen/LU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "kfront/errors.hpp"
#include "kfront/parallel.hpp"

namespace kfront {
namespace {


void check_options(const KineticOptions& o) {
  if (!(o.dx > 0.0)) throw ConfigError("dx must be positive");
  if (!(o.x_max >= 2.0 * o.dx)) throw ConfigError("x_max must cover at least two cells");
  if (!(o.cfl > 0.0) || o.cfl > 1.0) throw ConfigError("kinetic cfl must lie in (0, 1]");
  if (!(o.sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
  if (!(o.phase_floor > 0.0)) throw ConfigError("phase floor must be positive");
}

// Linear interpolation of the reference phase at x (clamped to its grid).
double reference_at(const HJField& ref, double x) {
  const double s = (x - ref.x.front()) / ref.dx;
  if (s <= 0.0) return ref.phi.front();
  const auto last = static_cast<double>(ref.x.size() - 1);
  if (s >= last) return ref.phi.back();
  const auto i = static_cast<std::size_t>(s);
  const double t = s - static_cast<double>(i);
  if (t < 1e-9) return ref.phi[i];
  return (1.0 - t) * ref.phi[i] + t * ref.phi[i + 1];
}

struct PhaseTracker {
  PhaseEstimates est;
  PhaseField prev;
  double prev_time = 0.0;
  bool has_prev = false;

  void sample(const KineticField& field, double floor) {
    PhaseField ph = extract_phase(field, floor);
    const Eigen::Index nx = ph.phi.rows();
    const Eigen::Index nv = ph.phi.cols();
    const Eigen::VectorXd& v = field.op->grid.nodes;
    double grad_v = 0.0;
    for (Eigen::Index i = 0; i < nx; ++i) {
      for (Eigen::Index j = 0; j < nv; ++j) {
        if (ph.clamped(i, j)) continue;
        est.max_phi = std::max(est.max_phi, ph.phi(i, j));
        if (i + 1 < nx && !ph.clamped(i + 1, j)) {
          est.max_grad_x_phi =
              std::max(est.max_grad_x_phi, std::abs(ph.phi(i + 1, j) - ph.phi(i, j)) / field.dx);
        }
        if (j + 1 < nv && !ph.clamped(i, j + 1)) {
          grad_v = std::max(grad_v, std::abs(ph.phi(i, j + 1) - ph.phi(i, j)) / (v[j + 1] - v[j]));
        }
        if (has_prev && !prev.clamped(i, j)) {
          est.max_dt_phi = std::max(est.max_dt_phi, std::abs(ph.phi(i, j) - prev.phi(i, j)) /
                                                        (field.time - prev_time));
        }
      }
    }
    est.sample_times.push_back(field.time);
    est.grad_v_curve.push_back(grad_v);
    prev = std::move(ph);
    prev_time = field.time;
    has_prev = true;
  }
};

}  // namespace

Eigen::VectorXd KineticField::density() const { return f * op->grid.weights; }

KineticField make_kinetic_field(std::shared_ptr<const DiscreteOperator> op, double epsilon,
                                const Profile& phi0, const KineticOptions& options) {
  check_options(options);
  if (!op) throw ConfigError("missing operator");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(op->equilibrium.values.minCoeff() > 0.0)) {
    throw ConfigError("kinetic solver needs a strictly positive equilibrium");
  }
  KineticField k;
  const long m = std::lround(options.x_max / options.dx);
  k.dx = options.dx;
  k.x_max = m * options.dx;
  k.x.resize(2 * m + 1);
  k.f.resize(2 * m + 1, op->grid.count());
  for (long i = -m; i <= m; ++i) {
    const double x = options.dx * static_cast<double>(i);
    const double p0 = phi0(x);
    if (!std::isfinite(p0) || p0 < 0.0) {
      throw ConfigError(fmt::format("initial phase must be finite and >= 0 (x = {})", x));
    }
    k.x[i + m] = x;
    k.f.row(i + m) = op->equilibrium.values.transpose() * std::exp(-p0 / epsilon);
  }
  k.epsilon = epsilon;
  k.periodic = options.periodic;
  k.op = std::move(op);
  return k;
}

void kinetic_step(KineticField& k, double dt) {
  const DiscreteOperator& op = *k.op;
  const Eigen::Index nx = k.f.rows();
  const Eigen::Index nv = k.f.cols();
  const Eigen::VectorXd& v = op.grid.nodes;
  if (!(dt > 0.0) || dt * op.grid.v_max > k.dx * (1.0 + 1e-12)) {
    throw ConfigError(fmt::format("kinetic step violates the transport CFL (dt = {})", dt));
  }

  // Upwind transport per velocity; outflow ghosts copy the boundary value.
  Eigen::MatrixXd g(nx, nv);
  parallel_for(static_cast<std::size_t>(nv), [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    const double c = dt * v[j] / k.dx;
    for (Eigen::Index i = 0; i < nx; ++i) {
      double upstream;
      if (c >= 0.0) {
        upstream = i > 0 ? k.f(i - 1, j) : (k.periodic ? k.f(nx - 1, j) : k.f(i, j));
      } else {
        upstream = i + 1 < nx ? k.f(i + 1, j) : (k.periodic ? k.f(0, j) : k.f(i, j));
      }
      g(i, j) = k.f(i, j) - std::abs(c) * (k.f(i, j) - upstream);
    }
  });

  // Implicit relaxation: (I - lam (L - r rho I)) f = g + lam r rho M.
  const double lam = dt / k.epsilon;
  const double r = op.growth_rate;
  const Eigen::VectorXd& m = op.equilibrium.values;
  const Eigen::VectorXd& w = op.grid.weights;
  const Eigen::MatrixXd base = Eigen::MatrixXd::Identity(nv, nv) - lam * op.matrix_l;
  Eigen::PartialPivLU<Eigen::MatrixXd> growth_free;
  if (r == 0.0) growth_free.compute(base);

  std::vector<double> violation(static_cast<std::size_t>(nx), 0.0);
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const Eigen::VectorXd gi = g.row(i).transpose();
    Eigen::VectorXd fi;
    if (r == 0.0) {
      fi = growth_free.solve(gi);
    } else {
      double rho = w.dot(gi);
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::MatrixXd a = base;
        a.diagonal().array() += lam * r * rho;
        fi = a.partialPivLu().solve(gi + lam * r * rho * m);
        rho = w.dot(fi);
      }
    }
    if (!fi.allFinite()) {
      throw SolverError(fmt::format("relaxation solve failed (eps = {}, dt = {})", k.epsilon, dt));
    }
    violation[ii] = std::max(-fi.minCoeff(), (fi - m).maxCoeff());
    k.f.row(i) = fi.transpose();
  });
  k.max_bound_violation =
      std::max(k.max_bound_violation, *std::max_element(violation.begin(), violation.end()));
  k.time += dt;
}

PhaseField extract_phase(const KineticField& k, double floor) {
  const Eigen::VectorXd& m = k.op->equilibrium.values;
  PhaseField ph;
  ph.phi.resize(k.f.rows(), k.f.cols());
  ph.clamped.resize(k.f.rows(), k.f.cols());
  for (Eigen::Index i = 0; i < k.f.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.f.cols(); ++j) {
      const double f = k.f(i, j);
      ph.clamped(i, j) = f < floor;
      ph.phi(i, j) = -k.epsilon * std::log(std::max(f, floor) / m[j]);
    }
  }
  return ph;
}

KineticRun run_kinetic(std::shared_ptr<const DiscreteOperator> op, double epsilon,
                       const Profile& phi0, double t_final, const KineticOptions& options) {
  if (!(t_final > 0.0)) throw ConfigError("final time must be positive");
  KineticRun out;
  out.field = make_kinetic_field(std::move(op), epsilon, phi0, options);
  KineticField& k = out.field;
  const double v_max = k.op->grid.v_max;
  out.steps = std::max(1L, static_cast<long>(std::ceil(t_final * v_max / (options.cfl * k.dx) - 1e-9)));
  out.dt = t_final / static_cast<double>(out.steps);

  PhaseTracker tracker;
  tracker.est.v_max = v_max;
  for (std::size_t i = 0; i < k.x.size(); ++i) {
    tracker.est.phi0_max = std::max(tracker.est.phi0_max, phi0(k.x[i]));
    if (i + 1 < k.x.size()) {
      tracker.est.phi0_max_slope =
          std::max(tracker.est.phi0_max_slope, std::abs(phi0(k.x[i + 1]) - phi0(k.x[i])) / k.dx);
    }
  }
  std::vector<double> pending = options.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snap = 0;
  auto take_snapshots = [&] {
    while (next_snap < pending.size() && pending[next_snap] <= k.time + 0.5 * out.dt) {
      out.snapshots.push_back({k.time, k.f, extract_phase(k, options.phase_floor)});
      ++next_snap;
    }
  };

  tracker.sample(k, options.phase_floor);
  take_snapshots();
  double next_sample = options.sample_dt;
  for (long s = 1; s <= out.steps; ++s) {
    kinetic_step(k, out.dt);
    if (k.max_bound_violation > options.bound_tol) {
      throw InvariantError(fmt::format(
          "sandwich 0 <= f <= M violated by {:.3e} at t = {} (eps = {}, dt = {})",
          k.max_bound_violation, k.time, epsilon, out.dt));
    }
    if (s == out.steps) k.time = t_final;
    if (k.time + 1e-12 >= next_sample || s == out.steps) {
      tracker.sample(k, options.phase_floor);
      next_sample += options.sample_dt;
    }
    take_snapshots();
  }
  out.estimates = std::move(tracker.est);
  out.phase = extract_phase(k, options.phase_floor);
  return out;
}

double phase_gap(const KineticField& k, const PhaseField& ph, const HJField& ref) {
  double gap = 0.0;
  for (std::size_t i = 0; i < k.x.size(); ++i) {
    if (std::abs(k.x[i]) > 0.7 * k.x_max + 1e-12) continue;
    const double phi0 = reference_at(ref, k.x[i]);
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < ph.phi.cols(); ++j) {
      if (ph.clamped(row, j)) continue;
      gap = std::max(gap, std::abs(ph.phi(row, j) - phi0));
    }
  }
  return gap;
}

RegionDiagnostics region_diagnostics(const KineticField& k, const PhaseField& ph,
                                     const HJField& ref, const RegionOptions& o) {
  (void)ph;
  RegionDiagnostics d;
  if (!(k.op->growth_rate > 0.0)) return d;  // no invasion without growth
  const std::size_t n = k.x.size();
  std::vector<double> phi0(n);
  for (std::size_t i = 0; i < n; ++i) phi0[i] = reference_at(ref, k.x[i]);

  const Eigen::VectorXd rho = k.density();
  const Eigen::VectorXd& m = k.op->equilibrium.values;
  for (std::size_t i = 0; i < n; ++i) {
    if (phi0[i] < o.zero_tol) {
      bool interior = true;
      for (std::size_t j = 0; j < n && interior; ++j) {
        if (phi0[j] >= o.zero_tol && std::abs(k.x[j] - k.x[i]) < o.interior_margin) {
          interior = false;
        }
      }
      if (!interior) continue;
      ++d.nullset_nodes;
      const double v = rho[static_cast<Eigen::Index>(i)];
      d.min_rho_nullset = d.min_rho_nullset ? std::min(*d.min_rho_nullset, v) : v;
    } else if (phi0[i] > o.pos_tol) {
      ++d.positive_nodes;
      const double v = (k.f.row(static_cast<Eigen::Index>(i)).transpose().array() / m.array())
                           .maxCoeff();
      d.max_f_positive_set = d.max_f_positive_set ? std::max(*d.max_f_positive_set, v) : v;
    }
  }
  return d;
}

HJRun hj_reference(std::shared_ptr<const DiscreteOperator> op, const Profile& phi0,
                   double t_final, const KineticOptions& options) {
  const long m = std::lround(options.x_max / options.dx);
  double slope = 0.0;
  for (long i = -m; i < m; ++i) {
    const double x = options.dx * static_cast<double>(i);
    slope = std::max(slope, std::abs(phi0(x + options.dx) - phi0(x)) / options.dx);
  }
  const double p_max = std::max(2.0, 1.25 * slope);
  auto model = std::make_shared<HamiltonianModel>(tabulate(*op, symmetric_grid(p_max, 0.05)));
  HJOptions ho;
  ho.dx = options.dx;
  ho.x_max = options.x_max;
  ho.cfl = 0.9;
  ho.flux = NumericalFlux::Godunov;
  const bool constrained = op->growth_rate > 0.0;
  return run(model, op->growth_rate, constrained, phi0, t_final, ho);
}

ConvergenceStudy convergence_study(std::shared_ptr<const DiscreteOperator> op,
                                   const std::vector<double>& eps_list, const Profile& phi0,
                                   double t_final, const KineticOptions& options,
                                   const HJField& ref) {
  if (eps_list.empty()) throw ConfigError("eps list is empty");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i) {
    if (!(eps_list[i + 1] < eps_list[i])) throw ConfigError("eps list must be strictly decreasing");
  }
  ConvergenceStudy study;
  study.rows.resize(eps_list.size());
  parallel_for(eps_list.size(), [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const KineticRun run = run_kinetic(op, eps_list[i], phi0, t_final, options);
    ConvergenceRow& row = study.rows[i];
    row.epsilon = eps_list[i];
    row.gap = phase_gap(run.field, run.phase, ref);
    row.regions = region_diagnostics(run.field, run.phase, ref);
    row.estimates = run.estimates;
    row.max_bound_violation = run.field.max_bound_violation;
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  study.gaps_strictly_decreasing = true;
  for (std::size_t i = 0; i + 1 < study.rows.size(); ++i) {
    if (!(study.rows[i + 1].gap < study.rows[i].gap)) study.gaps_strictly_decreasing = false;
  }
  return study;
}

void write_kinetic_snapshots_csv(const std::string& path, const KineticRun& run,
                                 const Metadata& metadata) {
  const Eigen::VectorXd& v = run.field.op->grid.nodes;
  CsvWriter out(path, {"t", "x", "v", "f", "phi_eps"}, metadata);
  for (const auto& s : run.snapshots) {
    for (Eigen::Index i = 0; i < s.f.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.f.cols(); ++j) {
        out.row({s.time, run.field.x[static_cast<std::size_t>(i)], v[j], s.f(i, j),
                 s.phase.phi(i, j)});
      }
    }
  }
}

void write_convergence_csv(const std::string& path, const ConvergenceStudy& study,
                           const Metadata& metadata) {
  CsvWriter out(path, {"eps", "gap", "min_rho_nullset", "max_f_positive"}, metadata);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : study.rows) {
    out.row({row.epsilon, row.gap, row.regions.min_rho_nullset.value_or(nan),
             row.regions.max_f_positive_set.value_or(nan)});
  }
}

}  // namespace kfront
