// splap — command line front end for the radial singular p-Laplacian toolkit.
//
// Subcommands:
//   verify   run the full inequality/identity verification battery, write verify.csv
//   solve    multi-start critical-point search at one (λ, γ), write solutions + profiles
//   sweep    critical-point counts over a (λ, γ) grid, write sweep.csv
//   beta     estimate β = sup J₁/Φ, write beta.csv + witness profile
//   energy   print the energy breakdown of a profile file (CSV columns r,u)
//
// Configuration: `--config <path>` reads line-based `key = value` pairs with
// `#` comments; command-line flags override file values.  Exit codes: 0
// success, 1 verification failure, 2 usage/config error, 3 solver
// non-convergence.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <splap/analysis.hpp>
#include <splap/csv.hpp>
#include <splap/functionals.hpp>
#include <splap/grid.hpp>
#include <splap/nonlinearity.hpp>
#include <splap/params.hpp>
#include <splap/solver.hpp>

namespace {

using namespace splap;

struct RunConfig {
  EnergyParams params;      // p, n, mu, lambda, gamma, R_omega
  ExampleParams example;    // r_ex, z, q
  std::string f_name = "example_f";
  std::string g_name = "example_g";
  std::size_t elements = 256;
  double grading = 0.98;
  std::string out_dir = ".";
  std::string profile;      // input for the energy subcommand
  SolveConfig solve;

  // Sweep grids.  lambda_count = 0 derives the λ grid from the β estimate:
  // 8 values spanning [0.5/β̂, 4/β̂].
  double lambda_min = 0.0, lambda_max = 0.0;
  std::size_t lambda_count = 0;
  double gamma_min = 0.0, gamma_max = 0.2;
  std::size_t gamma_count = 4;

  RunConfig() { params.mu = 0.1; }
};

double parse_double(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + text);
  }
  if (pos != text.size())
    throw std::invalid_argument("config: trailing characters for '" + key + "': " + text);
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad count for '" + key + "': " + text);
  }
  if (pos != text.size())
    throw std::invalid_argument("config: trailing characters for '" + key + "': " + text);
  return static_cast<std::uint64_t>(v);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void apply_key(RunConfig& rc, const std::string& key, const std::string& value) {
  if (key == "p") rc.params.p = parse_double(key, value);
  else if (key == "n") rc.params.n = static_cast<int>(parse_unsigned(key, value));
  else if (key == "mu") rc.params.mu = parse_double(key, value);
  else if (key == "lambda") rc.params.lambda = parse_double(key, value);
  else if (key == "gamma") rc.params.gamma = parse_double(key, value);
  else if (key == "R_omega") rc.params.R_omega = parse_double(key, value);
  else if (key == "r_ex") rc.example.r_ex = parse_double(key, value);
  else if (key == "z") rc.example.z = parse_double(key, value);
  else if (key == "q") rc.example.q = parse_double(key, value);
  else if (key == "f") rc.f_name = value;
  else if (key == "g") rc.g_name = value;
  else if (key == "elements") rc.elements = parse_unsigned(key, value);
  else if (key == "grading") rc.grading = parse_double(key, value);
  else if (key == "seed") rc.solve.seed = parse_unsigned(key, value);
  else if (key == "out") rc.out_dir = value;
  else if (key == "profile") rc.profile = value;
  else if (key == "tol") rc.solve.tol = parse_double(key, value);
  else if (key == "dist_tol") rc.solve.dist_tol = parse_double(key, value);
  else if (key == "random_starts") rc.solve.random_starts = parse_unsigned(key, value);
  else if (key == "max_iter_descent") rc.solve.max_iter_descent = parse_unsigned(key, value);
  else if (key == "max_iter_newton") rc.solve.max_iter_newton = parse_unsigned(key, value);
  else if (key == "enforce_checks") rc.solve.enforce_condition_checks = parse_unsigned(key, value) != 0;
  else if (key == "lambda_min") rc.lambda_min = parse_double(key, value);
  else if (key == "lambda_max") rc.lambda_max = parse_double(key, value);
  else if (key == "lambda_count") rc.lambda_count = parse_unsigned(key, value);
  else if (key == "gamma_min") rc.gamma_min = parse_double(key, value);
  else if (key == "gamma_max") rc.gamma_max = parse_double(key, value);
  else if (key == "gamma_count") rc.gamma_count = parse_unsigned(key, value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

void load_config_file(RunConfig& rc, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot read " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value': " + line);
    apply_key(rc, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

/// Values given as command-line flags; applied on top of the config file.
struct FlagOverrides {
  std::optional<double> p, mu, lambda, gamma, grading;
  std::optional<int> n;
  std::optional<std::uint64_t> elements, seed;
  std::optional<std::string> out;

  void apply(RunConfig& rc) const {
    if (p) rc.params.p = *p;
    if (n) rc.params.n = *n;
    if (mu) rc.params.mu = *mu;
    if (lambda) rc.params.lambda = *lambda;
    if (gamma) rc.params.gamma = *gamma;
    if (elements) rc.elements = static_cast<std::size_t>(*elements);
    if (grading) rc.grading = *grading;
    if (seed) rc.solve.seed = *seed;
    if (out) rc.out_dir = *out;
  }
};

struct Problem {
  RadialGrid grid;
  Nonlinearity f;
  Nonlinearity g;
};

Problem build_problem(const RunConfig& rc) {
  rc.params.validate();
  rc.example.validate(rc.params.p, rc.params.n);
  rc.solve.validate();
  Problem pb;
  pb.grid = make_grid(rc.elements, rc.grading, rc.params.R_omega);
  pb.f = nonlinearity_by_name(rc.f_name, rc.example, rc.params.p,
                              Nonlinearity::Kind::forcing);
  pb.g = nonlinearity_by_name(rc.g_name, rc.example, rc.params.p,
                              Nonlinearity::Kind::disturbance);
  return pb;
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(rc.out_dir, ec);
  if (ec)
    throw std::invalid_argument("cannot create output directory " + rc.out_dir +
                                ": " + ec.message());
  return (std::filesystem::path(rc.out_dir) / name).string();
}

/// Profile files carry the full nodal trace: one row per node, boundary
/// included, so they are a complete standalone description of the function.
void write_profile(const std::string& path, const DiscreteFunction& u) {
  CsvWriter w(path, {"r", "u"});
  const RadialGrid& grid = *u.grid;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    w.write_numeric_row({grid.nodes[i], u.node_value(i)});
}

DiscreteFunction read_profile(const std::string& path, RadialGrid& grid_storage) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("profile: cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "r,u")
    throw std::invalid_argument("profile: first line must be the header 'r,u'");
  std::vector<double> nodes, values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("profile: line " + std::to_string(lineno) +
                                  " is not 'r,u'");
    nodes.push_back(parse_double("r", trim(line.substr(0, comma))));
    values.push_back(parse_double("u", trim(line.substr(comma + 1))));
  }
  if (nodes.size() < 3)
    throw std::invalid_argument("profile: needs at least 3 rows (2 elements)");
  if (values.back() != 0.0)
    throw std::invalid_argument("profile: boundary value at r = R must be 0");
  grid_storage = grid_from_nodes(nodes);
  values.pop_back();
  return DiscreteFunction(grid_storage, std::move(values));
}

int run_verify(const RunConfig& rc) {
  Problem pb = build_problem(rc);
  std::vector<CheckRow> rows =
      run_verification(pb.grid, rc.params, pb.f, pb.g, rc.solve.seed);
  write_verification_csv(rows, out_path(rc, "verify.csv"));

  bool all_pass = true;
  for (const CheckRow& row : rows) {
    std::printf("%-22s %8llu  margin=% .3e  %s\n", row.name.c_str(),
                static_cast<unsigned long long>(row.samples), row.worst_margin,
                row.passes ? "PASS" : "FAIL");
    if (!row.passes) {
      all_pass = false;
      std::printf("    %s\n", row.detail.c_str());
    }
  }
  std::printf("%zu checks, %s\n", rows.size(), all_pass ? "all pass" : "FAILURES PRESENT");
  return all_pass ? 0 : 1;
}

int run_solve(const RunConfig& rc) {
  Problem pb = build_problem(rc);
  Assembler assembler(pb.grid, rc.params);
  SolveReport rep = find_critical_points(assembler, pb.f, pb.g, rc.solve);

  CsvWriter w(out_path(rc, "solutions.csv"),
              {"index", "norm_star", "energy", "phi", "j1", "j2", "residual",
               "iterations", "trivial"});
  for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
    const CriticalPoint& s = rep.solutions[i];
    const bool trivial = s.norm <= 10.0 * rc.solve.dist_tol;
    w.write_row({std::to_string(i), format_full(s.norm), format_full(s.energy.e),
                 format_full(s.energy.phi), format_full(s.energy.j1),
                 format_full(s.energy.j2), format_full(s.residual),
                 std::to_string(s.iterations), trivial ? "1" : "0"});
    char name[32];
    std::snprintf(name, sizeof(name), "solution_%03zu.csv", i);
    write_profile(out_path(rc, name), s.u);
  }

  std::printf("lambda=%.6g gamma=%.6g: %zu starts, %zu converged, "
              "%zu distinct, %zu nontrivial\n",
              rep.lambda, rep.gamma, rep.attempted_starts, rep.converged_starts,
              rep.distinct, rep.nontrivial);
  for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
    const CriticalPoint& s = rep.solutions[i];
    std::printf("  [%zu] |u|*=%-12.6g E=%-14.6g residual=%.3e iters=%zu\n", i,
                s.norm, s.energy.e, s.residual, s.iterations);
  }
  return rep.converged_starts > 0 ? 0 : 3;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) throw std::invalid_argument("grid count must be >= 1");
  std::vector<double> v;
  v.reserve(count);
  if (count == 1) {
    v.push_back(lo);
    return v;
  }
  for (std::size_t i = 0; i < count; ++i)
    v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return v;
}

int run_sweep(const RunConfig& rc) {
  Problem pb = build_problem(rc);
  Assembler assembler(pb.grid, rc.params);

  std::vector<double> lambda_grid;
  if (rc.lambda_count == 0) {
    BetaEstimate be = estimate_beta(assembler, pb.f, rc.solve);
    std::printf("beta_hat=%.6g, lambda grid spans [%.6g, %.6g]\n", be.beta_hat,
                0.5 * be.threshold, 4.0 * be.threshold);
    lambda_grid = linspace(0.5 * be.threshold, 4.0 * be.threshold, 8);
  } else {
    lambda_grid = linspace(rc.lambda_min, rc.lambda_max, rc.lambda_count);
  }
  std::vector<double> gamma_grid = linspace(rc.gamma_min, rc.gamma_max, rc.gamma_count);

  std::vector<SweepRow> rows = sweep(lambda_grid, gamma_grid, assembler, pb.f,
                                     pb.g, rc.solve);

  CsvWriter w(out_path(rc, "sweep.csv"),
              {"lambda", "gamma", "distinct", "nontrivial", "max_norm",
               "min_residual", "failed"});
  bool any_ok = false;
  for (const SweepRow& row : rows) {
    w.write_row({format_full(row.lambda), format_full(row.gamma),
                 std::to_string(row.distinct), std::to_string(row.nontrivial),
                 format_full(row.max_norm), format_full(row.min_residual),
                 row.failed ? "1" : "0"});
    std::printf("lambda=%-12.6g gamma=%-10.6g distinct=%zu nontrivial=%zu%s\n",
                row.lambda, row.gamma, row.distinct, row.nontrivial,
                row.failed ? "  FAILED" : "");
    if (!row.failed) any_ok = true;
  }
  return any_ok ? 0 : 3;
}

int run_beta(const RunConfig& rc) {
  Problem pb = build_problem(rc);
  Assembler assembler(pb.grid, rc.params);
  BetaEstimate be = estimate_beta(assembler, pb.f, rc.solve);

  CsvWriter w(out_path(rc, "beta.csv"),
              {"beta_hat", "threshold", "seed_ratio", "seed_s0",
               "seed_plateau_radius", "seed_support_radius"});
  w.write_numeric_row({be.beta_hat, be.threshold, be.seed_ratio, be.seed_spec.s0,
                       be.seed_spec.plateau_radius(), be.seed_spec.R_out});
  write_profile(out_path(rc, "witness.csv"), be.witness);

  std::printf("beta_hat  = %s\n", format_full(be.beta_hat).c_str());
  std::printf("threshold = %s (lambda must exceed this)\n",
              format_full(be.threshold).c_str());
  std::printf("seed bump ratio %.6g at s0=%.6g, plateau r<=%.6g, support r<=%.6g\n",
              be.seed_ratio, be.seed_spec.s0, be.seed_spec.plateau_radius(),
              be.seed_spec.R_out);
  return 0;
}

int run_energy(const RunConfig& rc) {
  if (rc.profile.empty())
    throw std::invalid_argument("energy: a profile file is required "
                                "(positional argument or 'profile' config key)");
  rc.params.validate();
  rc.example.validate(rc.params.p, rc.params.n);
  Nonlinearity f = nonlinearity_by_name(rc.f_name, rc.example, rc.params.p,
                                        Nonlinearity::Kind::forcing);
  Nonlinearity g = nonlinearity_by_name(rc.g_name, rc.example, rc.params.p,
                                        Nonlinearity::Kind::disturbance);

  RadialGrid grid;
  DiscreteFunction u = read_profile(rc.profile, grid);
  Assembler assembler(grid, rc.params);
  EnergyBreakdown eb = assembler.energy(u, f, g);

  std::printf("phi         = %s\n", format_full(eb.phi).c_str());
  std::printf("j1          = %s\n", format_full(eb.j1).c_str());
  std::printf("j2          = %s\n", format_full(eb.j2).c_str());
  std::printf("energy      = %s\n", format_full(eb.e).c_str());
  std::printf("norm_w_p    = %s\n", format_full(eb.norm_w_p).c_str());
  std::printf("norm_sing_p = %s\n", format_full(eb.norm_sing_p).c_str());
  std::printf("norm_star   = %s\n", format_full(assembler.norm_star(u)).c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial singular p-Laplacian: verification battery, "
               "critical-point search, and parameter sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  FlagOverrides flags;
  app.add_option("--config", config_path, "Config file (key = value, # comments)");
  app.add_option("--p", flags.p, "Growth exponent p (2 <= p < n)");
  app.add_option("--n", flags.n, "Spatial dimension n");
  app.add_option("--mu", flags.mu, "Singular potential weight");
  app.add_option("--lambda", flags.lambda, "Forcing weight");
  app.add_option("--gamma", flags.gamma, "Disturbance weight");
  app.add_option("--elements", flags.elements, "Radial element count");
  app.add_option("--grading", flags.grading, "Geometric mesh grading in (0,1]");
  app.add_option("--seed", flags.seed, "Random seed");
  app.add_option("--out", flags.out, "Output directory");

  CLI::App* sub_verify = app.add_subcommand("verify", "Run the verification battery");
  CLI::App* sub_solve = app.add_subcommand("solve", "Find critical points at one (lambda, gamma)");
  CLI::App* sub_sweep = app.add_subcommand("sweep", "Count critical points over a (lambda, gamma) grid");
  CLI::App* sub_beta = app.add_subcommand("beta", "Estimate beta = sup J1/Phi");
  CLI::App* sub_energy = app.add_subcommand("energy", "Print the energy breakdown of a profile");
  std::string profile_arg;
  sub_energy->add_option("profile", profile_arg, "Profile CSV (columns r,u)");
  for (CLI::App* sub : {sub_verify, sub_solve, sub_sweep, sub_beta, sub_energy})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    RunConfig rc;
    if (!config_path.empty()) load_config_file(rc, config_path);
    flags.apply(rc);
    if (!profile_arg.empty()) rc.profile = profile_arg;

    if (sub_verify->parsed()) return run_verify(rc);
    if (sub_solve->parsed()) return run_solve(rc);
    if (sub_sweep->parsed()) return run_sweep(rc);
    if (sub_beta->parsed()) return run_beta(rc);
    if (sub_energy->parsed()) return run_energy(rc);
    return 2; // unreachable: require_subcommand(1)
  } catch (const NonConvergence& e) {
    std::fprintf(stderr, "error: %s (best residual %.3e)\n", e.what(), e.residual);
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
