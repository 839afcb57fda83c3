#include <fmt/format.h>

#include <CLI11.hpp>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "criteria.hpp"

using namespace kfront::acceptance;

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria A1-A11; one PASS/FAIL line per criterion"};
  std::string only;
  CliSetup setup;
  app.add_option("--only", only, "run a single criterion, e.g. A4");
  app.add_option("--cli", setup.cli, "path to the kfront executable (A11)");
  app.add_option("--workdir", setup.workdir, "scratch directory for A11")->default_val("a11_work");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"A1", a1_spectral_closed_form},
      {"A2", a2_method_agreement},
      {"A3", a3_hamiltonian_properties},
      {"A4", a4_quadratic_front},
      {"A5", a5_kinetic_front},
      {"A6", a6_hopf_lax},
      {"A7", a7_kinetic_convergence},
      {"A8", a8_phase_bounds},
      {"A9", a9_kolmogorov},
      {"A10", a10_unbounded_formulas},
      {"A11", [&] { return a11_determinism(setup); }},
  };

  int failures = 0;
  bool matched = false;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && only != name) continue;
    if (name == "A11" && setup.cli.empty()) {
      fmt::print("{} SKIP  no --cli given\n", name);
      matched = true;
      continue;
    }
    matched = true;
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, fmt::format("exception: {}", e.what())};
    }
    fmt::print("{} {}  {}\n", name, out.pass ? "PASS" : "FAIL", out.detail);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (!matched) {
    fmt::print(stderr, "unknown criterion '{}'\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
