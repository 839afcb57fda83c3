#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kfront/csv.hpp"
#include "kfront/hj_solver.hpp"
#include "kfront/operators.hpp"

namespace kfront {

struct KineticOptions {
  double dx = 0.01;
  double x_max = 3.0;
  double cfl = 0.9;
  double sample_dt = 0.1;  // spacing of the phase-estimate samples
  double phase_floor = 1e-300;
  double bound_tol = 1e-10;
  bool periodic = false;  // default is outflow (copy) boundaries
  std::vector<double> snapshot_times;
};

// f(x_i, v_j) on the hyperbolic scaling eps d_t f + eps v d_x f = L f + r rho (M - f).
struct KineticField {
  std::vector<double> x;
  double dx = 0.0;
  double x_max = 0.0;
  std::shared_ptr<const DiscreteOperator> op;
  Eigen::MatrixXd f;  // rows: x nodes, columns: velocity nodes
  double epsilon = 1.0;
  double time = 0.0;
  bool periodic = false;
  double max_bound_violation = 0.0;  // worst excursion outside [0, M] seen so far

  Eigen::VectorXd density() const;
};

// phi_eps = -eps ln(f / M); clamped marks f below the floor.
struct PhaseField {
  Eigen::MatrixXd phi;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> clamped;
};

struct PhaseEstimates {
  double max_phi = 0.0;
  double max_dt_phi = 0.0;
  double max_grad_x_phi = 0.0;
  std::vector<double> sample_times;
  std::vector<double> grad_v_curve;  // max |d_v phi| at each sample time
  double phi0_max = 0.0;
  double phi0_max_slope = 0.0;
  double v_max = 0.0;
};

struct KineticSnapshot {
  double time = 0.0;
  Eigen::MatrixXd f;
  PhaseField phase;
};

struct KineticRun {
  KineticField field;
  PhaseField phase;
  PhaseEstimates estimates;
  std::vector<KineticSnapshot> snapshots;
  long steps = 0;
  double dt = 0.0;
};

KineticField make_kinetic_field(std::shared_ptr<const DiscreteOperator> op, double epsilon,
                                const Profile& phi0, const KineticOptions& options);

// Upwind transport then implicit relaxation with a lagged, once-refreshed rho.
void kinetic_step(KineticField& field, double dt);

PhaseField extract_phase(const KineticField& field, double floor = 1e-300);

KineticRun run_kinetic(std::shared_ptr<const DiscreteOperator> op, double epsilon,
                       const Profile& phi0, double t_final, const KineticOptions& options);

struct RegionDiagnostics {
  std::optional<double> min_rho_nullset;    // over the nullset interior
  std::optional<double> max_f_positive_set; // max f/M where phi0 > pos_tol
  std::size_t nullset_nodes = 0;
  std::size_t positive_nodes = 0;
};

struct RegionOptions {
  double zero_tol = 1e-6;
  double pos_tol = 0.1;
  double interior_margin = 0.5;
};

RegionDiagnostics region_diagnostics(const KineticField& field, const PhaseField& phase,
                                     const HJField& hj_reference, const RegionOptions& options = {});

// max over |x| <= 0.7 x_max and all v of |phi_eps - phi0|, clamped nodes excluded.
double phase_gap(const KineticField& field, const PhaseField& phase, const HJField& hj_reference);

struct ConvergenceRow {
  double epsilon = 0.0;
  double gap = 0.0;
  RegionDiagnostics regions;
  PhaseEstimates estimates;
  double max_bound_violation = 0.0;
  double seconds = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  bool gaps_strictly_decreasing = false;
};

ConvergenceStudy convergence_study(std::shared_ptr<const DiscreteOperator> op,
                                   const std::vector<double>& eps_list, const Profile& phi0,
                                   double t_final, const KineticOptions& options,
                                   const HJField& hj_reference);

// HJ limit for a kinetic run: tabulated H of op, same grid, Godunov flux.
HJRun hj_reference(std::shared_ptr<const DiscreteOperator> op, const Profile& phi0,
                   double t_final, const KineticOptions& options);

void write_kinetic_snapshots_csv(const std::string& path, const KineticRun& run,
                                 const Metadata& metadata);
void write_convergence_csv(const std::string& path, const ConvergenceStudy& study,
                           const Metadata& metadata);

}  // namespace kfront
