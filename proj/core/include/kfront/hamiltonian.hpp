#pragma once

#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kfront/csv.hpp"
#include "kfront/operators.hpp"

namespace kfront {

namespace model {

struct Quadratic {
  double d = 1.0;  // H = d p^2
};

struct BGKClosed {
  double v_max = 1.0;
  double r = 0.0;  // growth rate folded into the operator
};

struct VFP {
  double sigma = 1.0;  // H = sigma^4 p^2
};

struct NonlocalGaussian {};  // H = exp(p^2 / 2) - 1

struct NonlocalLaplace {};  // H = p^2 / (1 - p^2), |p| < 1

struct Tabulated {
  std::vector<double> p;
  std::vector<double> h;
  double measured_lipschitz = 0.0;
  double v_max = 0.0;  // 0 when unknown
  struct Interpolant;
  std::shared_ptr<const Interpolant> interp;
};

}  // namespace model

class HamiltonianModel {
 public:
  using Kind = std::variant<model::Quadratic, model::BGKClosed, model::VFP,
                            model::NonlocalGaussian, model::NonlocalLaplace, model::Tabulated>;

  static HamiltonianModel quadratic(double d);
  static HamiltonianModel bgk_closed(double v_max, double r);
  static HamiltonianModel vfp(double sigma);
  static HamiltonianModel nonlocal_gaussian();
  static HamiltonianModel nonlocal_laplace();
  // pchip interpolation of (p, h); p strictly increasing and symmetric about 0.
  static HamiltonianModel tabulated(std::vector<double> p, std::vector<double> h,
                                    double lipschitz_bound, double v_max = 0.0);

  double eval(double p) const;
  double deriv(double p) const;

  // Global bound on |H'|; infinite for the unbounded-velocity kinds.
  double lipschitz_bound() const { return lipschitz_bound_; }

  // sup |H'(p)| over |p| <= p_range, capped by lipschitz_bound().
  double slope_bound(double p_range) const;

  // Closed interval of admissible p (open ends are shrunk by a relative 1e-9).
  std::pair<double, double> domain() const;

  std::string name() const;
  const Kind& kind() const { return kind_; }
  bool is_tabulated() const { return std::holds_alternative<model::Tabulated>(kind_); }

 private:
  HamiltonianModel(Kind kind, double lipschitz_bound);

  Kind kind_;
  double lipschitz_bound_;
};

// Runs solve_direct at each node of a symmetric p grid.
HamiltonianModel tabulate(const DiscreteOperator& op, const std::vector<double>& p_grid);

// Uniform symmetric grid -p_max, ..., p_max with spacing close to dp.
std::vector<double> symmetric_grid(double p_max, double dp);

struct SpeedResult {
  double c_star = 0.0;
  double p_star = 0.0;
  int iterations = 0;
  bool at_horizon = false;  // (H + r)/p still decreasing at the search edge
};

SpeedResult min_wave_speed(const HamiltonianModel& model, double r);

struct LegendreResult {
  std::vector<double> values;  // sup_p (p q - H(p) - r); +inf when unbounded
  double zero_crossing = std::numeric_limits<double>::quiet_NaN();  // smallest q >= 0 with L = 0
};

LegendreResult legendre(const HamiltonianModel& model, double r, const std::vector<double>& q_grid);

// Single value of sup_p (p q - H(p) - r).
double lagrangian(const HamiltonianModel& model, double r, double q);

// max(t L(x/t), 0) for point-mass initial data at the origin.
std::vector<double> hopf_lax_solution(const HamiltonianModel& model, double r, double t,
                                      const std::vector<double>& x_grid);

// Columns p, H, dH with '#' metadata.
void write_hamiltonian_csv(const std::string& path, const HamiltonianModel& model,
                           const std::vector<double>& p_grid, const Metadata& metadata = {});
HamiltonianModel read_hamiltonian_csv(const std::string& path);

}  // namespace kfront
