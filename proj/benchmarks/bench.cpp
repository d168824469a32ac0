// Microbenchmarks for the hot paths: moment assembly, energy/gradient
// evaluation, the inner linear solve, the benchmark inversion, and one full
// critical-point search at a small size.
#include <benchmark/benchmark.h>

#include "splap/analysis.hpp"
#include "splap/functionals.hpp"
#include "splap/grid.hpp"
#include "splap/nonlinearity.hpp"
#include "splap/params.hpp"
#include "splap/solver.hpp"
#include "splap/tridiag.hpp"

using namespace splap;

namespace {

struct Fixture {
  RadialGrid grid;
  EnergyParams params;
  Assembler assembler;
  Nonlinearity f, g;
  DiscreteFunction u;

  explicit Fixture(std::size_t elements)
      : grid(make_grid(elements, 0.98, 1.0)),
        params([] {
          EnergyParams p;
          p.mu = 0.1;
          p.lambda = 12.0;
          p.gamma = 0.1;
          return p;
        }()),
        assembler(grid, params),
        f(example_f(ExampleParams{}, params.p)),
        g(example_g(ExampleParams{})),
        u(build_bump(BumpSpec{1.2, 0.3, 0.8, 0.9}, grid)) {}
};

void BM_moment_assembly(benchmark::State& state) {
  RadialGrid grid = make_grid(static_cast<std::size_t>(state.range(0)), 0.98, 1.0);
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.elements(); ++k)
      acc += moment(grid, k, 2.0).matrix[0][0];
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_moment_assembly)->Arg(64)->Arg(256);

void BM_assembler_construction(benchmark::State& state) {
  RadialGrid grid = make_grid(static_cast<std::size_t>(state.range(0)), 0.98, 1.0);
  EnergyParams params;
  params.mu = 0.1;
  for (auto _ : state) {
    Assembler assembler(grid, params);
    benchmark::DoNotOptimize(assembler.quadratic_part().diag.data());
  }
}
BENCHMARK(BM_assembler_construction)->Arg(64)->Arg(256);

void BM_energy(benchmark::State& state) {
  Fixture fx(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    EnergyBreakdown eb = fx.assembler.energy(fx.u, fx.f, fx.g);
    benchmark::DoNotOptimize(eb.e);
  }
}
BENCHMARK(BM_energy)->Arg(64)->Arg(256);

void BM_gradient(benchmark::State& state) {
  Fixture fx(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    GradientVector gv = fx.assembler.gradient(fx.u, fx.f, fx.g);
    benchmark::DoNotOptimize(gv.dual_norm);
  }
}
BENCHMARK(BM_gradient)->Arg(64)->Arg(256);

void BM_tridiagonal_solve(benchmark::State& state) {
  Fixture fx(static_cast<std::size_t>(state.range(0)));
  std::vector<double> rhs = fx.assembler.measure_load();
  for (auto _ : state) {
    std::vector<double> x = solve_sym_tridiag(fx.assembler.quadratic_part(), rhs);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_tridiagonal_solve)->Arg(64)->Arg(256);

void BM_unit_load_inversion(benchmark::State& state) {
  RadialGrid grid = make_grid(static_cast<std::size_t>(state.range(0)), 1.0, 1.0);
  EnergyParams params;
  Assembler assembler(grid, params);
  SolveConfig config;
  std::vector<double> load = assembler.measure_load();
  for (auto _ : state) {
    DiscreteFunction u = invert_phi_prime(load, assembler, config);
    benchmark::DoNotOptimize(u.coeffs.data());
  }
}
BENCHMARK(BM_unit_load_inversion)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_critical_point_search(benchmark::State& state) {
  Fixture fx(48);
  SolveConfig config;
  config.random_starts = 1;
  for (auto _ : state) {
    SolveReport rep = find_critical_points(fx.assembler, fx.f, fx.g, config);
    benchmark::DoNotOptimize(rep.distinct);
  }
}
BENCHMARK(BM_critical_point_search)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
