#pragma once

#include <string>
#include <vector>

#include "manifest.hpp"

namespace kfront::cli {

struct RunConfig {
  std::string command;
  std::string out = "kfront_out";

  // Operator / Hamiltonian selection.
  std::string model = "bgk";  // bgk kernel elliptic quadratic vfp nonlocal-gaussian nonlocal-laplace table
  double v_max = 1.0;
  int n = 0;  // 0: 201 for spectral commands, 32 for kinetic ones
  std::string quadrature = "auto";  // auto: midpoint for elliptic, Gauss-Legendre otherwise
  double r = 0.0;
  std::string kernel_csv;
  double diffusivity = 1.0;
  double d = 1.0;
  double sigma = 1.0;
  std::string table;
  bool discrete = false;  // tabulate the operator instead of using a closed form

  // Numerics.
  double dx = 0.01;
  double t_final = 1.0;
  double cfl = 0.9;
  double x_max = 0.0;  // 0: command default
  std::string flux = "godunov";
  double cone_slope = 0.0;  // 0: 4 p*
  bool unconstrained = false;
  bool hopf_lax = false;
  std::vector<double> snapshots;
  std::vector<double> eps_list;
  double p_max = 8.0;
  double dp = 0.05;
  double phi0_offset = 0.5;
  double phi0_cap = 2.0;

  // Unbounded-velocity commands.
  double w = 0.0;
  std::string check;
  std::string kernel = "laplace";
  double p = 0.0;
};

// Throws ConfigError with a one-line reason.
void validate(const RunConfig& cfg);

void record_parameters(const RunConfig& cfg, Manifest& manifest);

// Returns the process exit status; files written are appended to the manifest.
int run_command(const RunConfig& cfg, Manifest& manifest);

}  // namespace kfront::cli
