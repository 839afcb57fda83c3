#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kfront/csv.hpp"
#include "kfront/hamiltonian.hpp"

namespace kfront {

enum class NumericalFlux {
  Godunov,        // H(max(a+, -b-)); needs H even and nondecreasing in |p|
  LaxFriedrichs,  // H((a+b)/2) - alpha (b-a)/2
};

const char* to_string(NumericalFlux flux);

struct HJOptions {
  double dx = 0.01;
  double x_max = 8.0;
  double cfl = 0.9;
  NumericalFlux flux = NumericalFlux::Godunov;
  double alpha = 0.0;      // 0: sup |H'| over the slopes of phi0
  double sample_dt = 0.0;  // 0: sample the front every step
  double zero_tol = 1e-6;
  std::vector<double> snapshot_times;
};

// phi on x_i = dx * i, i = -m..m.
struct HJField {
  std::vector<double> x;
  std::vector<double> phi;
  double dx = 0.0;
  double x_max = 0.0;
  double time = 0.0;
  double dt = 0.0;
  double alpha = 0.0;
  double slope_limit = 0.0;  // |grad phi| must stay below this
  double r = 0.0;
  bool constrained = true;
  NumericalFlux flux = NumericalFlux::Godunov;
  std::shared_ptr<const HamiltonianModel> model;
};

struct FrontReport {
  std::vector<double> times;
  std::vector<double> front_positions;
  double fitted_speed = 0.0;
  double predicted_c_star = 0.0;
  double relative_error = 0.0;
};

struct HJSnapshot {
  double time = 0.0;
  std::vector<double> phi;
};

struct HJRun {
  HJField field;
  FrontReport front;
  std::vector<HJSnapshot> snapshots;
};

using Profile = std::function<double(double)>;

// min(K |x|, cap): the point-mass initial datum used for front runs.
Profile point_cone(double slope, double cap = 50.0);

// Half-width large enough to contain the front up to time T.
double auto_x_max(double c_star, double t_final);

HJField make_hj_field(std::shared_ptr<const HamiltonianModel> model, double r, bool constrained,
                      const Profile& phi0, const HJOptions& options);

// Explicit Euler step of dt (dt <= cfl dx / alpha is enforced).
void step(HJField& field, double dt);

HJRun run(std::shared_ptr<const HamiltonianModel> model, double r, bool constrained,
          const Profile& phi0, double t_final, const HJOptions& options);

// Rightmost node with phi < zero_tol, linearly interpolated; NaN when none.
double front_position(const HJField& field, double zero_tol = 1e-6);

// Least-squares slope of position against time over t >= t_from.
double fit_speed(const std::vector<double>& t, const std::vector<double>& x, double t_from);

// max over |x| <= 0.8 x_max of |phi - Hopf-Lax|; nodes with an infinite reference are skipped.
double compare_hopf_lax(const HJField& field, const HamiltonianModel& model, double r);

void write_snapshots_csv(const std::string& path, const HJRun& run, const Metadata& metadata);
void write_front_csv(const std::string& path, const HJRun& run, const Metadata& metadata);

// Two-dimensional radial variant on [-x_max, x_max]^2 with the Godunov flux
// applied to |grad phi|; reports the nullset radius along the axes and diagonal.
struct HJ2DResult {
  double time = 0.0;
  double radius_axis = 0.0;
  double radius_diagonal = 0.0;
  std::vector<double> x;
  std::vector<double> phi;  // row-major, y outer
};

HJ2DResult run_2d(const HamiltonianModel& model, double r, const Profile& phi0_radial,
                  double t_final, const HJOptions& options);

}  // namespace kfront
