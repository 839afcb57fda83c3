#pragma once

#include <complex>
#include <string>
#include <vector>

namespace kfront {

struct KolmogorovParams {
  double sigma = 1.0;  // velocity diffusivity
  double w = 0.0;      // initial velocity
};

// Fundamental solution of d_t f + v d_x f = sigma d_vv f started at (0, w), n = 1.
double kolmogorov_density(const KolmogorovParams& params, double t, double x, double v);

// (v^2 t^2 + 3 (2x - v t)^2) / (4 sigma t^3)
double kolmogorov_phase(double sigma, double t, double x, double v);

// min over v of kolmogorov_phase, attained at v = 3x / (2t).
double kolmogorov_phase_min(double sigma, double t, double x);

// x > 0 where the minimal phase equals level.
double kolmogorov_level_set(double sigma, double t, double level);

struct VfpResult {
  double h_value = 0.0;
  std::vector<double> v;
  std::vector<double> q;
  double relative_residual = 0.0;  // on the inner 80% of the grid
};

// Closed-form VFP eigenpair sampled on [-half_width, half_width] and checked
// against centered differences of d_v(d_v Q + v Q / sigma^2) + v p Q = H Q.
VfpResult vfp_spectral(double sigma, double p, double half_width, int n);

enum class KernelKind { Gaussian, Laplace, Custom };

struct NonlocalKernel {
  KernelKind kind = KernelKind::Gaussian;
  std::vector<double> x;  // Custom: symmetric uniform sample grid
  std::vector<double> k;  // Custom: kernel values, unit mass

  static NonlocalKernel gaussian() { return {KernelKind::Gaussian, {}, {}}; }
  static NonlocalKernel laplace() { return {KernelKind::Laplace, {}, {}}; }
  // Samples are rescaled to unit trapezoid mass.
  static NonlocalKernel custom(std::vector<double> x, std::vector<double> k);

  std::string name() const;
  bool in_domain(double p) const;
  // int K(x) exp(-i xi x) dx
  std::complex<double> fourier(double xi) const;
  // int K(x) exp(p x) dx
  double exponential_moment(double p) const;
};

// K^(ip) - 1
double convolution_hamiltonian(const NonlocalKernel& kernel, double p);

struct NonlocalEigvecOptions {
  double xi_max = 0.0;          // 0: 7 / window
  double substep = 2e-4;        // trapezoid step of the line integral
  double window = 0.05;         // Gaussian spectral window exp(-(xi window)^2 / 2)
  double synthesis_dxi = 0.02;  // xi spacing of the Fourier synthesis
  double v_half_width = 30.0;
  int v_count = 1201;
};

struct NonlocalEigvec {
  std::vector<double> xi;
  std::vector<std::complex<double>> fourier;  // unwindowed F(Q_p)(xi)
  std::vector<double> v;
  std::vector<double> q;  // real part of the windowed synthesis
  double min_q = 0.0;
  double max_imag = 0.0;
  double mass = 0.0;  // trapezoid sum of q
};

NonlocalEigvec nonlocal_eigvec(const NonlocalKernel& kernel, double p,
                               const NonlocalEigvecOptions& options = {});

struct NonexistenceProbe {
  std::vector<double> half_widths;
  std::vector<double> eigenvalues;
  bool strictly_increasing = false;
};

// Principal eigenvalue of sigma d_vv (Neumann) + v p on growing truncations.
NonexistenceProbe spectral_nonexistence_probe(double sigma, double p,
                                              const std::vector<double>& half_widths,
                                              double dv = 0.05);

}  // namespace kfront
