// Acceptance gate: each numbered check answers one quantitative question the
// library must get right, at pinned tolerances, and prints a single
// PASS/FAIL line.  Run with a criterion number (1..10) or "all"; checks that
// spawn the command-line tool need its path as the second argument.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "splap/analysis.hpp"
#include "splap/functionals.hpp"
#include "splap/grid.hpp"
#include "splap/nonlinearity.hpp"
#include "splap/params.hpp"
#include "splap/rng.hpp"
#include "splap/solver.hpp"

using namespace splap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string cli_binary; // set from argv for checks that spawn the tool

DiscreteFunction random_function(const RadialGrid& grid, RandomStream& rng) {
  DiscreteFunction u(grid);
  for (double& c : u.coeffs) c = rng.uniform(-1.0, 1.0);
  return u;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

// --- 1: the Hardy inequality on random discrete functions -------------------

Outcome hardy_inequality() {
  RadialGrid grid = make_grid(256, 0.98, 1.0);
  EnergyParams params; // p = 2, n = 3: constant (p/(n−p))^p = 4
  Assembler assembler(grid, params);
  RandomStream rng(RandomStream::child_seed(1, 101));
  double worst = -1e300;
  for (int s = 0; s < 1000; ++s) {
    DiscreteFunction u = random_function(grid, rng);
    double lhs = assembler.norm_sing_p(u);
    double rhs = 4.0 * assembler.norm_w_p(u);
    worst = std::max(worst, (lhs - rhs) / rhs);
  }
  return {worst <= 1e-8, "worst relative excess " + fmt(worst) + " (allowed 1e-08)"};
}

// --- 2: the vector monotonicity inequality -----------------------------------

Outcome vector_inequality() {
  RandomStream rng(RandomStream::child_seed(1, 202));
  std::size_t violations = 0;
  double worst_eq = 0.0;
  for (double p : {2.0, 3.0, 4.0}) {
    for (int s = 0; s < 100000; ++s) {
      std::vector<double> x(3), y(3);
      for (double& c : x) c = rng.uniform(-1.0, 1.0);
      for (double& c : y) c = rng.uniform(-1.0, 1.0);
      InequalityCheck c = chabrowski_check(x, y, p);
      if (!c.passes) ++violations;
      if (p == 2.0) worst_eq = std::max(worst_eq, std::fabs(c.lhs - c.rhs) / (1.0 + c.rhs));
    }
  }
  bool pass = violations == 0 && worst_eq <= 1e-14;
  return {pass, std::to_string(violations) + " violations in 3x100000 pairs, p=2 imbalance " +
                    fmt(worst_eq)};
}

// --- 3: assembled gradients against central differences ----------------------

Outcome gradient_consistency() {
  ExampleParams ex;
  RadialGrid grid = make_grid(256, 0.98, 1.0);
  RandomStream rng(RandomStream::child_seed(1, 303));
  double worst = 0.0;
  int checked = 0;
  for (double p : {2.0, 3.0}) {
    Nonlinearity f = example_f(ex, p), g = example_g(ex);
    for (double mu : {0.0, 1.0}) {
      EnergyParams params;
      params.p = p;
      params.n = 4;
      params.mu = mu;
      params.lambda = 1.0;
      params.gamma = 1.0;
      Assembler assembler(grid, params);
      for (int rep = 0; rep < 13 && checked < 50; ++rep, ++checked) {
        DiscreteFunction u = random_function(grid, rng);
        DiscreteFunction v = random_function(grid, rng);
        double pairing = 0.0;
        GradientVector gv = assembler.gradient(u, f, g);
        for (std::size_t i = 0; i < v.coeffs.size(); ++i) pairing += gv.e_prime[i] * v.coeffs[i];
        const double h = 1e-6;
        DiscreteFunction up = u, um = u;
        up += h * v;
        um -= h * v;
        double fd = (assembler.energy(up, f, g).e - assembler.energy(um, f, g).e) / (2.0 * h);
        worst = std::max(worst, std::fabs(fd - pairing) / (1.0 + std::fabs(pairing)));
      }
    }
  }
  return {worst <= 1e-6 && checked == 50,
          "50 directional derivatives, worst relative gap " + fmt(worst) + " (allowed 1e-06)"};
}

// --- 4: functional monotonicity and invertibility ----------------------------

Outcome monotone_operator() {
  RandomStream rng(RandomStream::child_seed(1, 404));
  SolveConfig config;
  bool all = true;
  double worst_inv = 0.0;
  int pairs = 0;
  for (double p : {2.0, 3.0}) {
    for (double mu : {0.0, 1.0}) {
      EnergyParams params;
      params.p = p;
      params.n = 4;
      params.mu = mu;
      RadialGrid grid = make_grid(256, 0.98, 1.0);
      Assembler assembler(grid, params);
      for (int rep = 0; rep < 50; ++rep, ++pairs) {
        DiscreteFunction u = random_function(grid, rng), v = random_function(grid, rng);
        if (!monotonicity_gap(u, v, assembler).passes) all = false;
      }
      for (int rep = 0; rep < 2; ++rep) {
        DiscreteFunction u = random_function(grid, rng);
        DiscreteFunction w = invert_phi_prime(assembler.phi_prime(u), assembler, config);
        double err = assembler.norm_star(w - u) / std::max(1.0, assembler.norm_star(u));
        worst_inv = std::max(worst_inv, err);
      }
    }
  }
  bool pass = all && pairs == 200 && worst_inv <= 1e-5;
  return {pass, "200 pairings bounded below, worst inversion error " + fmt(worst_inv) +
                    " (allowed 1e-05)"};
}

// --- 5: the unit-load benchmark problem --------------------------------------

double poisson_error(std::size_t elements) {
  RadialGrid grid = make_grid(elements, 1.0, 1.0);
  EnergyParams params; // p = 2, mu = 0, n = 3
  Assembler assembler(grid, params);
  SolveConfig config;
  DiscreteFunction u = invert_phi_prime(assembler.measure_load(), assembler, config);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    double r = grid.nodes[i];
    worst = std::max(worst, std::fabs(u.node_value(i) - (1.0 - r * r) / 6.0));
  }
  return worst;
}

Outcome benchmark_solution() {
  double e64 = poisson_error(64), e128 = poisson_error(128), e256 = poisson_error(256);
  bool trend = e64 / e128 >= 3.5 && e128 / e256 >= 3.5;
  bool absolute = e256 <= 1e-6;
  return {absolute && trend,
          "max nodal error " + fmt(e256) + " at 256 elements (required 1e-06); "
          "refinement ratios " + fmt(e64 / e128) + ", " + fmt(e128 / e256) +
          (trend ? " satisfy" : " violate") + " the 3.5x decay"};
}

// --- 6: certification of the concrete nonlinearities -------------------------

Outcome example_certification() {
  ExampleParams ex; // r_ex = 1, z = 1, q = 2
  const double p = 2.0;
  ex.validate(p, 3);
  Nonlinearity f = example_f(ex, p), g = example_g(ex);
  bool conds = check_f1(f, p).passes && check_f2(f, p).passes && check_f3(f).passes &&
               check_g1(g).passes;
  double FT = f.anti(M_PI / 2.0);
  double target = M_PI * M_PI / 8.0;
  double rel = std::fabs(FT - target) / target;
  bool value = rel <= 1e-9 && FT > M_PI * M_PI / 16.0;
  return {conds && value, std::string("growth/positivity checks ") +
                              (conds ? "pass" : "FAIL") + "; F(pi/2) off by " + fmt(rel) +
                              " relative (allowed 1e-09)"};
}

// --- 7: positivity of the ratio supremum --------------------------------------

Outcome ratio_positivity() {
  RadialGrid grid = make_grid(256, 0.98, 1.0);
  EnergyParams params;
  params.mu = 0.1;
  Assembler assembler(grid, params);
  ExampleParams ex;
  Nonlinearity f = example_f(ex, params.p);
  BetaEstimate est = estimate_beta(assembler, f, SolveConfig{});

  bool positive = est.beta_hat > 0.0 && est.seed_ratio > 0.0;
  // The witness certifying positivity: plateau value, bounded amplitude, and
  // compact support must hold exactly at the nodes, not approximately.
  const BumpSpec& spec = est.seed_spec;
  bool plateau = false, supported = true, bounded = true;
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    double v = est.seed_bump.node_value(i);
    sup = std::max(sup, std::fabs(v));
    if (v == spec.s0 && grid.nodes[i] <= spec.plateau_radius()) plateau = true;
    if (grid.nodes[i] > spec.R_out + grid.h(grid.elements() - 1) && v != 0.0) supported = false;
    if (!(std::fabs(v) <= std::fabs(spec.s0))) bounded = false;
  }
  bool nodal = plateau && supported && bounded && sup == std::fabs(spec.s0);
  return {positive && nodal, "beta_hat " + fmt(est.beta_hat) + ", seed ratio " +
                                 fmt(est.seed_ratio) + ", nodal conditions " +
                                 (nodal ? "exact" : "VIOLATED")};
}

// --- 8: multiple solutions across the predicted window -----------------------

Outcome multiplicity_window() {
  RadialGrid grid = make_grid(256, 0.98, 1.0);
  EnergyParams params;
  params.mu = 0.1;
  Assembler base(grid, params);
  ExampleParams ex;
  Nonlinearity f = example_f(ex, params.p), g = example_g(ex);
  SolveConfig config;
  BetaEstimate est = estimate_beta(base, f, config);
  config.seed = 1;
  std::size_t best_distinct = 0, best_nontrivial = 0;
  double worst_residual = 0.0, bound = 0.0, best_lambda = 0.0;
  bool window_hit = false, norms_ok = true;
  std::string cells;
  for (int i = 0; i < 8; ++i) {
    double lambda = 0.5 * est.threshold + (4.0 * est.threshold - 0.5 * est.threshold) * i / 7.0;
    EnergyParams cell = params;
    cell.lambda = lambda;
    Assembler assembler(grid, cell);
    SolveReport rep = find_critical_points(assembler, f, g, config);
    for (const CriticalPoint& cp : rep.solutions) {
      worst_residual = std::max(worst_residual, cp.residual);
      bound = std::max(bound, cp.norm);
      if (!(cp.norm <= rep.max_norm)) norms_ok = false; // reported bound must cover its cell
    }
    if (rep.distinct >= 3 && rep.nontrivial >= 2 && !window_hit) {
      window_hit = true;
      best_distinct = rep.distinct;
      best_nontrivial = rep.nontrivial;
      best_lambda = lambda;
    }
    cells += (i ? "," : "") + std::to_string(rep.distinct);
  }
  norms_ok = norms_ok && std::isfinite(bound);
  bool residual_ok = worst_residual <= 1e-8;
  bool pass = window_hit && residual_ok && norms_ok;
  std::string detail = "distinct counts [" + cells + "]";
  if (window_hit)
    detail += "; " + std::to_string(best_distinct) + " distinct / " +
              std::to_string(best_nontrivial) + " nontrivial at lambda " + fmt(best_lambda);
  detail += "; worst residual " + fmt(worst_residual) + ", norm bound " + fmt(bound);
  return {pass, detail};
}

// --- 9: norm and metric axioms ------------------------------------------------

Outcome norm_axioms() {
  RadialGrid grid = make_grid(256, 0.98, 1.0);
  EnergyParams params;
  params.mu = 0.1;
  Assembler assembler(grid, params);
  RandomStream rng(RandomStream::child_seed(1, 909));
  double worst = 0.0;
  bool metric_ok = true;
  for (int s = 0; s < 1000; ++s) {
    DiscreteFunction u = random_function(grid, rng);
    DiscreteFunction v = random_function(grid, rng);
    DiscreteFunction w = random_function(grid, rng);

    double lhs = assembler.norm_star(u + v);
    double rhs = assembler.norm_star(u) + assembler.norm_star(v);
    worst = std::max(worst, (lhs - rhs) / (1.0 + rhs));

    double alpha = rng.uniform(-3.0, 3.0);
    double h1 = assembler.norm_star(alpha * u);
    double h2 = std::fabs(alpha) * assembler.norm_star(u);
    worst = std::max(worst, std::fabs(h1 - h2) / (1.0 + h2));

    if (!metric_combination_check(u, v, w, assembler)) metric_ok = false;
  }
  bool pass = worst <= 1e-12 && metric_ok;
  return {pass, "1000 triples, worst axiom slack " + fmt(worst) + " (allowed 1e-12), metric " +
                    (metric_ok ? "consistent" : "VIOLATED")};
}

// --- 10: byte-identical outputs for identical configuration ------------------

int spawn(const std::string& args) {
  std::string cmd = cli_binary + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  if (rc == -1 || !WIFEXITED(rc)) return -1;
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility() {
  if (cli_binary.empty())
    return {false, "command-line binary path missing (pass it as the second argument)"};
  fs::path root = "acceptance_scratch";
  fs::remove_all(root);
  fs::create_directories(root / "v1");
  fs::create_directories(root / "v2");
  fs::create_directories(root / "s1");
  fs::create_directories(root / "s2");

  int rc = 0;
  rc |= spawn("verify --elements 64 --seed 5 --out " + (root / "v1").string());
  rc |= spawn("verify --elements 64 --seed 5 --out " + (root / "v2").string());

  std::ofstream conf(root / "sweep.conf");
  conf << "elements = 32\nseed = 3\nrandom_starts = 2\n"
       << "lambda_min = 10\nlambda_max = 14\nlambda_count = 2\n"
       << "gamma_min = 0\ngamma_max = 0.05\ngamma_count = 2\n";
  conf.close();
  rc |= spawn("sweep --config " + (root / "sweep.conf").string() + " --out " +
              (root / "s1").string());
  rc |= spawn("sweep --config " + (root / "sweep.conf").string() + " --out " +
              (root / "s2").string());

  std::string v1 = slurp(root / "v1" / "verify.csv");
  std::string v2 = slurp(root / "v2" / "verify.csv");
  std::string s1 = slurp(root / "s1" / "sweep.csv");
  std::string s2 = slurp(root / "s2" / "sweep.csv");
  bool pass = rc == 0 && !v1.empty() && v1 == v2 && !s1.empty() && s1 == s2;
  return {pass, std::string("verify ") + (v1 == v2 ? "identical" : "DIFFERS") + " (" +
                    std::to_string(v1.size()) + " bytes), sweep " +
                    (s1 == s2 ? "identical" : "DIFFERS") + " (" + std::to_string(s1.size()) +
                    " bytes)"};
}

struct Criterion {
  int id;
  const char* label;
  double budget_seconds; // 0 = no limit
  std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv) {
  std::string which = argc > 1 ? argv[1] : "all";
  if (argc > 2) cli_binary = argv[2];

  const std::vector<Criterion> criteria = {
      {1, "hardy inequality on random functions", 5.0, hardy_inequality},
      {2, "pointwise monotonicity inequality", 2.0, vector_inequality},
      {3, "gradient consistency", 0.0, gradient_consistency},
      {4, "operator monotonicity and inversion", 0.0, monotone_operator},
      {5, "unit-load benchmark accuracy", 0.0, benchmark_solution},
      {6, "example nonlinearity certification", 0.0, example_certification},
      {7, "ratio supremum positivity", 0.0, ratio_positivity},
      {8, "multiplicity across the window", 300.0, multiplicity_window},
      {9, "norm and metric axioms", 0.0, norm_axioms},
      {10, "byte-identical reruns", 0.0, reproducibility},
  };

  bool all_pass = true;
  bool ran_any = false;
  for (const Criterion& c : criteria) {
    if (which != "all" && which != std::to_string(c.id)) continue;
    ran_any = true;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && sec > c.budget_seconds) {
      out.pass = false;
      out.detail += " [exceeded " + std::to_string(int(c.budget_seconds)) + "s budget]";
    }
    std::printf("criterion %2d: %s  %-42s (%.2fs) %s\n", c.id, out.pass ? "PASS" : "FAIL",
                c.label, sec, out.detail.c_str());
    if (!out.pass) all_pass = false;
  }
  if (!ran_any) {
    std::fprintf(stderr, "unknown criterion selector: %s\n", which.c_str());
    return 2;
  }
  return all_pass ? 0 : 1;
}
