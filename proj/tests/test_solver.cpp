#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "splap/analysis.hpp"
#include "splap/functionals.hpp"
#include "splap/grid.hpp"
#include "splap/nonlinearity.hpp"
#include "splap/params.hpp"
#include "splap/rng.hpp"
#include "splap/solver.hpp"

using namespace splap;

namespace {

DiscreteFunction random_function(const RadialGrid& grid, RandomStream& rng) {
  DiscreteFunction u(grid);
  for (double& c : u.coeffs) c = rng.uniform(-1.0, 1.0);
  return u;
}

double poisson_error(std::size_t elements) {
  // −Δu = 1 on the unit ball (p = 2, μ = 0, n = 3) has u(r) = (1 − r²)/6.
  RadialGrid grid = make_grid(elements, 1.0, 1.0);
  EnergyParams params;
  Assembler assembler(grid, params);
  SolveConfig config;
  DiscreteFunction u = invert_phi_prime(assembler.measure_load(), assembler, config);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    double r = grid.nodes[i];
    double exact = (1.0 - r * r) / 6.0;
    worst = std::max(worst, std::fabs(u.node_value(i) - exact));
  }
  return worst;
}

} // namespace

TEST_SUITE("solver") {

TEST_CASE("solver configuration is validated") {
  SolveConfig config;
  CHECK_NOTHROW(config.validate());
  config.tol = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SolveConfig{};
  config.backtrack = 1.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SolveConfig{};
  config.dist_tol = -1.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("inverting the zero load gives the zero function") {
  RadialGrid grid = make_grid(64, 1.0, 1.0);
  EnergyParams params;
  Assembler assembler(grid, params);
  SolveConfig config;
  std::vector<double> w(grid.dof_count(), 0.0);
  DiscreteFunction u = invert_phi_prime(w, assembler, config);
  CHECK(assembler.norm_star(u) <= 1e-12);

  std::vector<double> bad(grid.dof_count() + 1, 0.0);
  CHECK_THROWS_AS(invert_phi_prime(bad, assembler, config), std::invalid_argument);
}

TEST_CASE("unit-load inversion reproduces the quadratic profile") {
  double e256 = poisson_error(256);
  CHECK(e256 <= 1e-5);
  CHECK(e256 > 0.0);
}

TEST_CASE("nodal errors shrink like the square of the mesh size") {
  double e64 = poisson_error(64);
  double e128 = poisson_error(128);
  double e256 = poisson_error(256);
  CHECK(e64 / e128 >= 3.5);
  CHECK(e128 / e256 >= 3.5);
}

TEST_CASE("inversion is a left inverse of the derivative map") {
  SolveConfig config;
  RandomStream rng(13);
  for (double p : {2.0, 3.0}) {
    EnergyParams params;
    params.p = p;
    params.n = 4;
    params.mu = 0.5;
    RadialGrid grid = make_grid(64, 0.95, 1.0);
    Assembler assembler(grid, params);
    for (int rep = 0; rep < 5; ++rep) {
      DiscreteFunction u = random_function(grid, rng);
      DiscreteFunction v = invert_phi_prime(assembler.phi_prime(u), assembler, config);
      double err = assembler.norm_star(v - u);
      CHECK(err <= 1e-5 * std::max(1.0, assembler.norm_star(u)));
    }
  }
}

TEST_CASE("small perturbations of the load give small solution changes") {
  RadialGrid grid = make_grid(64, 1.0, 1.0);
  EnergyParams params;
  params.p = 3.0;
  params.n = 4;
  Assembler assembler(grid, params);
  SolveConfig config;
  RandomStream rng(29);
  DiscreteFunction u = random_function(grid, rng);
  std::vector<double> w = assembler.phi_prime(u);
  std::vector<double> noise(w.size());
  for (double& c : noise) c = rng.uniform(-1.0, 1.0);

  double prev = 1e300;
  for (int k = 2; k <= 6; ++k) {
    double eps = std::pow(10.0, -k);
    std::vector<double> wp = w;
    for (std::size_t i = 0; i < wp.size(); ++i) wp[i] += eps * noise[i];
    DiscreteFunction v = invert_phi_prime(wp, assembler, config);
    double dist = assembler.norm_star(v - u);
    CHECK(dist < prev * (1.0 + 1e-9));
    prev = dist;
  }
  CHECK(prev <= 1e-2); // orders of magnitude below the first perturbation scale
}

TEST_CASE("starved iteration budgets surface as non-convergence") {
  RadialGrid grid = make_grid(32, 1.0, 1.0);
  EnergyParams params;
  params.p = 3.0;
  params.n = 4;
  Assembler assembler(grid, params);
  SolveConfig config;
  config.tol = 1e-15;
  config.max_iter_descent = 2;
  config.max_iter_newton = 2;
  RandomStream rng(31);
  DiscreteFunction u = random_function(grid, rng);
  try {
    invert_phi_prime(assembler.phi_prime(u), assembler, config);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& nc) {
    CHECK(nc.residual > 0.0);
  }
}

TEST_CASE("without forcing the only critical point is the origin") {
  RadialGrid grid = make_grid(64, 0.98, 1.0);
  EnergyParams params;
  params.mu = 0.1;
  Assembler assembler(grid, params); // lambda = gamma = 0
  ExampleParams ex;
  Nonlinearity f = example_f(ex, params.p), g = example_g(ex);
  SolveConfig config;

  SolveReport report = find_critical_points(assembler, f, g, config);
  CHECK(report.distinct == 1);
  CHECK(report.nontrivial == 0);
  CHECK(report.converged_starts == report.attempted_starts);
  REQUIRE(report.solutions.size() == 1);
  CHECK(report.solutions[0].norm <= 10.0 * config.dist_tol);
  CHECK(report.solutions[0].residual <= config.tol);
}

TEST_CASE("above the threshold three energy levels separate") {
  RadialGrid grid = make_grid(128, 0.98, 1.0);
  EnergyParams params;
  params.mu = 0.1;
  params.lambda = 23.6;
  Assembler assembler(grid, params);
  ExampleParams ex;
  Nonlinearity f = example_f(ex, params.p), g = example_g(ex);
  SolveConfig config;

  SolveReport report = find_critical_points(assembler, f, g, config);
  CHECK(report.distinct >= 3);
  CHECK(report.nontrivial >= 2);
  for (const CriticalPoint& cp : report.solutions) {
    CHECK(cp.residual <= config.tol);
    CHECK(cp.norm <= report.max_norm);
  }
  // Representatives of distinct clusters really are far apart.
  for (std::size_t i = 0; i < report.solutions.size(); ++i)
    for (std::size_t j = i + 1; j < report.solutions.size(); ++j) {
      double d = assembler.norm_star(report.solutions[i].u - report.solutions[j].u);
      CHECK(d > config.dist_tol);
    }
}

TEST_CASE("a disturbance term pushes the trivial solution off the origin") {
  RadialGrid grid = make_grid(64, 0.98, 1.0);
  EnergyParams params;
  params.mu = 0.1;
  params.lambda = 10.0;
  params.gamma = 0.05;
  Assembler assembler(grid, params);
  ExampleParams ex;
  Nonlinearity f = example_f(ex, params.p), g = example_g(ex);
  SolveConfig config;

  // The origin itself fails the stationarity test ...
  DiscreteFunction zero(grid);
  CHECK(assembler.gradient(zero, f, g).dual_norm > config.tol);

  // ... and every converged cluster sits at a nontrivial norm.
  SolveReport report = find_critical_points(assembler, f, g, config);
  CHECK(report.distinct >= 1);
  CHECK(report.nontrivial == report.distinct);
  for (const CriticalPoint& cp : report.solutions) CHECK(cp.norm > 10.0 * config.dist_tol);
}

TEST_CASE("condition enforcement rejects forcing terms with linear growth") {
  RadialGrid grid = make_grid(32, 1.0, 1.0);
  EnergyParams params;
  params.lambda = 1.0; // conditions gate only terms that are switched on
  Assembler assembler(grid, params);
  ExampleParams ex;
  Nonlinearity bad = power_nonlinearity(1.0, Nonlinearity::Kind::forcing);
  Nonlinearity g = example_g(ex);
  SolveConfig config;
  CHECK_THROWS_AS(find_critical_points(assembler, bad, g, config), std::invalid_argument);

  // With enforcement off the same problem is accepted and solved.
  config.enforce_condition_checks = false;
  CHECK_NOTHROW(find_critical_points(assembler, bad, g, config));
}

TEST_CASE("extra starts must live on the assembler grid") {
  RadialGrid grid = make_grid(32, 1.0, 1.0);
  RadialGrid other = make_grid(32, 1.0, 1.0);
  EnergyParams params;
  Assembler assembler(grid, params);
  ExampleParams ex;
  Nonlinearity f = example_f(ex, params.p), g = example_g(ex);
  SolveConfig config;
  std::vector<DiscreteFunction> starts;
  starts.emplace_back(other);
  CHECK_THROWS_AS(find_critical_points(assembler, f, g, config, starts), std::invalid_argument);
}

TEST_CASE("ratio maximization certifies positivity and survives rescaling") {
  RadialGrid grid = make_grid(128, 0.98, 1.0);
  EnergyParams params;
  params.mu = 0.1;
  Assembler assembler(grid, params);
  ExampleParams ex;
  Nonlinearity f = example_f(ex, params.p);
  SolveConfig config;

  BetaEstimate est = estimate_beta(assembler, f, config);
  CHECK(est.beta_hat > 0.05);
  CHECK(est.threshold == doctest::Approx(1.0 / est.beta_hat).epsilon(1e-14));

  // The reported maximum is the ratio of its own witness.
  double j1 = assembler.j_value(est.witness, f);
  double phi = assembler.phi(est.witness);
  CHECK(j1 / phi == doctest::Approx(est.beta_hat).epsilon(1e-12));

  // The certifying seed profile satisfies its plateau/support/sup-norm
  // conditions exactly at nodal level and already has a positive ratio.
  CHECK(est.seed_ratio > 0.0);
  CHECK(est.beta_hat >= est.seed_ratio * (1.0 - 1e-12));
  const BumpSpec& spec = est.seed_spec;
  double sup = 0.0;
  bool plateau_hit = false;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    double v = est.seed_bump.node_value(i);
    sup = std::max(sup, std::fabs(v));
    if (v == spec.s0) plateau_hit = true;
    if (grid.nodes[i] > spec.R_out + grid.h(grid.elements() - 1)) CHECK(v == 0.0);
  }
  CHECK(plateau_hit);
  CHECK(sup == doctest::Approx(std::fabs(spec.s0)).epsilon(1e-15));

  // Restarting the ascent from rescaled witnesses recovers the same maximum.
  for (double t : {0.5, 2.0}) {
    BetaEstimate again = improve_ratio(assembler, f, t * est.witness);
    CHECK(again.beta_hat == doctest::Approx(est.beta_hat).epsilon(1e-6));
  }

  // A forcing term with no positive potential mass cannot produce a ratio.
  CHECK_THROWS_WITH_AS(
      estimate_beta(assembler, zero_nonlinearity(Nonlinearity::Kind::forcing), config),
      "no positive ratio", std::runtime_error);
}

TEST_CASE("parameter sweeps reproduce single solves and validate their grids") {
  RadialGrid grid = make_grid(64, 0.98, 1.0);
  EnergyParams params;
  params.mu = 0.1;
  Assembler assembler(grid, params);
  ExampleParams ex;
  Nonlinearity f = example_f(ex, params.p), g = example_g(ex);
  SolveConfig config;
  config.random_starts = 2;

  std::vector<SweepRow> rows = sweep({0.0}, {0.0}, assembler, f, g, config);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].failed);
  CHECK(rows[0].distinct == 1);
  CHECK(rows[0].nontrivial == 0);
  CHECK(rows[0].max_norm <= 10.0 * config.dist_tol);
  CHECK(rows[0].min_residual <= config.tol);

  CHECK_THROWS_AS(sweep({}, {0.0}, assembler, f, g, config), std::invalid_argument);
  CHECK_THROWS_AS(sweep({1.0}, {}, assembler, f, g, config), std::invalid_argument);
  CHECK_THROWS_AS(sweep({-1.0}, {0.0}, assembler, f, g, config), std::invalid_argument);

  // Rows are a deterministic function of the configuration.
  std::vector<SweepRow> a = sweep({10.0, 14.0}, {0.0}, assembler, f, g, config);
  std::vector<SweepRow> b = sweep({10.0, 14.0}, {0.0}, assembler, f, g, config);
  REQUIRE(a.size() == 2);
  REQUIRE(b.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].distinct == b[i].distinct);
    CHECK(a[i].max_norm == b[i].max_norm);
    CHECK(a[i].min_residual == b[i].min_residual);
  }
  CHECK(a[1].distinct >= 3); // past the threshold the solution count jumps
}

} // TEST_SUITE("solver")
