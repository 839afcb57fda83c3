#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <exception>
#include <string>

#include "commands.hpp"
#include "kfront/errors.hpp"
#include "kfront/parallel.hpp"
#include "kfront/version.hpp"
#include "manifest.hpp"

namespace {

using kfront::cli::RunConfig;

void operator_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model,
                  "bgk, kernel, elliptic, quadratic, vfp, nonlocal-gaussian, nonlocal-laplace, table");
  sub->add_option("--vmax", cfg.v_max, "velocity bound V_max");
  sub->add_option("--N", cfg.n, "velocity nodes (default 201; 32 for kinetic runs)");
  sub->add_option("--quadrature", cfg.quadrature, "auto, gauss or midpoint");
  sub->add_option("--r", cfg.r, "growth rate");
  sub->add_option("--kernel-csv", cfg.kernel_csv, "N x N kernel matrix K(v_i, v_j)");
  sub->add_option("--diffusivity", cfg.diffusivity, "constant D(v) of the elliptic operator");
  sub->add_option("--D", cfg.d, "quadratic coefficient, H = D p^2");
  sub->add_option("--sigma", cfg.sigma, "VFP diffusivity");
  sub->add_option("--table", cfg.table, "Hamiltonian CSV written by the hamiltonian command");
  sub->add_flag("--discrete", cfg.discrete, "tabulate the discrete BGK operator instead of its closed form");
  sub->add_option("--p-max", cfg.p_max, "half-width of the momentum grid");
  sub->add_option("--dp", cfg.dp, "momentum grid step");
}

void transport_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--dx", cfg.dx, "space step");
  sub->add_option("--T", cfg.t_final, "final time");
  sub->add_option("--cfl", cfg.cfl, "CFL number, at most 0.9");
  sub->add_option("--x-max", cfg.x_max, "half-width of the domain (default depends on the command)");
  sub->add_option("--snapshots", cfg.snapshots, "snapshot times")->delimiter(',');
}

void kinetic_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--eps", cfg.eps_list, "epsilon value(s), comma separated")->delimiter(',');
  sub->add_option("--phi0-offset", cfg.phi0_offset, "phi0 = min(max(|x| - offset, 0), cap)");
  sub->add_option("--phi0-cap", cfg.phi0_cap, "cap of phi0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinetic front propagation: spectral Hamiltonians, HJ fronts, kinetic limits"};
  app.set_version_flag("--version", kfront::kVersion);
  app.require_subcommand(1, 1);
  RunConfig cfg;
  app.add_option("--out", cfg.out, "output directory");

  auto* ham = app.add_subcommand("hamiltonian", "tabulate H(p) on a symmetric momentum grid");
  operator_flags(ham, cfg);
  auto* speed = app.add_subcommand("speed", "minimal front speed min_p (H(p) + r) / p");
  operator_flags(speed, cfg);
  auto* hj = app.add_subcommand("hj", "constrained Hamilton-Jacobi front run");
  operator_flags(hj, cfg);
  transport_flags(hj, cfg);
  hj->add_option("--flux", cfg.flux, "godunov or lax-friedrichs");
  hj->add_option("--cone-slope", cfg.cone_slope, "slope of the initial cone (default 4 p*)");
  hj->add_flag("--unconstrained", cfg.unconstrained, "drop the obstacle max(., 0)");
  hj->add_flag("--hopf-lax", cfg.hopf_lax, "report the Hopf-Lax discrepancy");
  auto* kin = app.add_subcommand("kinetic", "single kinetic run at one epsilon");
  operator_flags(kin, cfg);
  transport_flags(kin, cfg);
  kinetic_flags(kin, cfg);
  auto* conv = app.add_subcommand("converge", "kinetic runs over decreasing epsilon against the HJ limit");
  operator_flags(conv, cfg);
  transport_flags(conv, cfg);
  kinetic_flags(conv, cfg);
  auto* kol = app.add_subcommand("kolmogorov", "kinetic-diffusion fundamental solution checks");
  kol->add_option("--sigma", cfg.sigma, "velocity diffusivity");
  kol->add_option("--w", cfg.w, "initial velocity");
  kol->add_option("--T", cfg.t_final, "time of the sampled snapshot");
  kol->add_option("--check", cfg.check, "residual, mass, phase-min or all");
  auto* nl = app.add_subcommand("nonlocal", "convolution Hamiltonian and eigenvector reconstruction");
  nl->add_option("--kernel", cfg.kernel, "gaussian, laplace or custom");
  nl->add_option("--kernel-csv", cfg.kernel_csv, "columns x, K for a custom kernel");
  nl->add_option("--p", cfg.p, "momentum");
  nl->add_option("--check", cfg.check, "positivity");
  for (auto* sub : {ham, speed, hj, kin, conv, kol, nl}) {
    sub->add_option("--out", cfg.out, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fmt::print(stderr, "kfront: {}\n", e.what());
    return 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  if (const char* env = std::getenv("KINETIC_FRONT_THREADS")) {
    try {
      kfront::set_max_threads(static_cast<unsigned>(std::stoul(env)));
    } catch (const std::exception&) {
      fmt::print(stderr, "kfront: KINETIC_FRONT_THREADS must be a nonnegative integer\n");
      return 2;
    }
  }

  kfront::cli::Manifest manifest(cfg.command);
  int status = 0;
  try {
    kfront::cli::record_parameters(cfg, manifest);
    kfront::cli::validate(cfg);
    status = kfront::cli::run_command(cfg, manifest);
    if (status != 0) manifest.set_status("check-failed");
  } catch (const kfront::ConfigError& e) {
    fmt::print(stderr, "kfront {}: {}\n", cfg.command, e.what());
    manifest.set_status("invalid", e.what());
    status = 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "kfront {}: solver error: {}\n", cfg.command, e.what());
    manifest.set_status("error", e.what());
    status = 1;
  }
  try {
    manifest.write(cfg.out);
  } catch (const std::exception& e) {
    fmt::print(stderr, "kfront: could not write manifest: {}\n", e.what());
    if (status == 0) status = 1;
  }
  return status;
}
