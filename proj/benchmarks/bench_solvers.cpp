#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "kfront/hamiltonian.hpp"
#include "kfront/hj_solver.hpp"
#include "kfront/kinetic_solver.hpp"
#include "kfront/operators.hpp"
#include "kfront/spectral.hpp"
#include "kfront/velocity_space.hpp"

using namespace kfront;

namespace {

DiscreteOperator bgk(int n, double r) {
  const auto g = make_grid(1.0, n, QuadratureRule::GaussLegendre);
  return build_bgk(g, uniform_equilibrium(g), r);
}

void BM_SolveDirect(benchmark::State& state) {
  const auto op = bgk(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_direct(op, 2.0).h_value);
}
BENCHMARK(BM_SolveDirect)->Arg(64)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_SolveDirectShiftedPower(benchmark::State& state) {
  const auto op = bgk(static_cast<int>(state.range(0)), 1.0);
  PerronOptions o;
  o.scheme = PerronScheme::ShiftedPower;
  for (auto _ : state) benchmark::DoNotOptimize(solve_direct(op, 2.0, o).h_value);
}
BENCHMARK(BM_SolveDirectShiftedPower)->Arg(64)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_KreinRutman(benchmark::State& state) {
  const auto op = bgk(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_krein_rutman(op, 2.0).h_value);
}
BENCHMARK(BM_KreinRutman)->Arg(64)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_Tabulate(benchmark::State& state) {
  const auto op = bgk(64, 1.0);
  const auto grid = symmetric_grid(8.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(tabulate(op, grid).eval(1.0));
}
BENCHMARK(BM_Tabulate)->Unit(benchmark::kMillisecond);

void BM_HJStep(benchmark::State& state) {
  HJOptions o;
  o.dx = 0.01;
  o.x_max = static_cast<double>(state.range(0));
  auto field = make_hj_field(std::make_shared<HamiltonianModel>(HamiltonianModel::bgk_closed(1.0, 1.0)),
                             1.0, true, point_cone(12.0), o);
  for (auto _ : state) {
    step(field, field.dt);
    benchmark::DoNotOptimize(field.phi.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(field.phi.size()));
}
BENCHMARK(BM_HJStep)->Arg(8)->Arg(32);

void BM_KineticStep(benchmark::State& state) {
  const auto op = std::make_shared<const DiscreteOperator>(bgk(static_cast<int>(state.range(0)), 1.0));
  KineticOptions o;
  o.dx = 0.01;
  o.x_max = 3.0;
  auto field = make_kinetic_field(op, 0.125, point_cone(1.0, 2.0), o);
  const double dt = 0.9 * o.dx / op->grid.v_max;
  for (auto _ : state) {
    kinetic_step(field, dt);
    benchmark::DoNotOptimize(field.f.data());
  }
}
BENCHMARK(BM_KineticStep)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
