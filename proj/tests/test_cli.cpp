#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("SPLAP_CLI");
  REQUIRE_MESSAGE(env != nullptr, "SPLAP_CLI must point at the command-line binary");
  return env;
}

int run(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = cli_path() + " " + args;
  if (!stdout_file.empty())
    cmd += " > " + stdout_file + " 2>&1";
  else
    cmd += " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), ("cannot open " + path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_data_lines(const std::string& body) {
  std::istringstream in(body);
  std::string line;
  std::size_t count = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (!line.empty()) ++count;
  }
  return count;
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("verify exits cleanly and writes the battery table") {
  fs::path dir = scratch("verify");
  int code = run("verify --elements 64 --out " + dir.string());
  CHECK(code == 0);
  std::string csv = slurp(dir / "verify.csv");
  CHECK(csv.rfind("name,samples,worst_margin,pass", 0) == 0);
  CHECK(count_data_lines(csv) == 21);
  CHECK(csv.find("hardy") != std::string::npos);
  CHECK(csv.find("false") == std::string::npos);
}

TEST_CASE("verify output is byte-reproducible for a fixed seed") {
  fs::path a = scratch("repro_a"), b = scratch("repro_b");
  CHECK(run("verify --elements 64 --seed 5 --out " + a.string()) == 0);
  CHECK(run("verify --elements 64 --seed 5 --out " + b.string()) == 0);
  CHECK(slurp(a / "verify.csv") == slurp(b / "verify.csv"));
}

TEST_CASE("usage and configuration errors exit with code 2") {
  fs::path dir = scratch("usage");
  CHECK(run("") == 2);                          // missing subcommand
  CHECK(run("verify --no-such-flag") == 2);     // unknown flag
  CHECK(run("verify --p 1.5") == 2);            // exponent below the supported range
  CHECK(run("frobnicate") == 2);                // unknown subcommand
  CHECK(run("verify --config " + (dir / "missing.conf").string()) == 2);

  write_file(dir / "bad_q.conf", "q = 6\n");
  CHECK(run("verify --config " + (dir / "bad_q.conf").string()) == 2);

  write_file(dir / "bad_key.conf", "no_such_key = 1\n");
  CHECK(run("verify --config " + (dir / "bad_key.conf").string()) == 2);

  write_file(dir / "bad_f.conf", "f = bogus\n");
  CHECK(run("verify --config " + (dir / "bad_f.conf").string()) == 2);

  CHECK(run("--help") == 0); // requesting help is not an error
}

TEST_CASE("solve without forcing reports exactly the trivial solution") {
  fs::path dir = scratch("solve0");
  int code = run("solve --lambda 0 --gamma 0 --elements 64 --out " + dir.string());
  CHECK(code == 0);
  std::string csv = slurp(dir / "solutions.csv");
  CHECK(csv.rfind("index,norm_star,energy,phi,j1,j2,residual,iterations,trivial", 0) == 0);
  CHECK(count_data_lines(csv) == 1);
  CHECK(fs::exists(dir / "solution_000.csv"));

  // The profile has one row per node, boundary included.
  std::string profile = slurp(dir / "solution_000.csv");
  CHECK(profile.rfind("r,u", 0) == 0);
  CHECK(count_data_lines(profile) == 65);
}

TEST_CASE("starved iteration budgets exit with code 3") {
  fs::path dir = scratch("starve");
  write_file(dir / "starve.conf",
             "elements = 32\nlambda = 10\ngamma = 0.05\nmax_iter_descent = 1\n"
             "max_iter_newton = 1\nrandom_starts = 1\ntol = 1e-15\n");
  int code = run("solve --config " + (dir / "starve.conf").string() + " --out " + dir.string());
  CHECK(code == 3);
}

TEST_CASE("energy recomputes closed-form values from a stored profile") {
  fs::path dir = scratch("energy");
  // The cone u(r) = 1 − r: phi = 2π/3 for p = 2, μ = 0 on any grid.
  write_file(dir / "cone.csv", "r,u\n0,1\n0.5,0.5\n1,0\n");
  fs::path out = dir / "energy.txt";
  int code = run("energy " + (dir / "cone.csv").string() + " --mu 0", out.string());
  CHECK(code == 0);

  std::istringstream in(slurp(out));
  double phi = 0.0;
  bool found = false;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("phi", 0) == 0) {
      phi = std::stod(line.substr(line.find('=') + 1));
      found = true;
    }
  }
  REQUIRE(found);
  CHECK(phi == doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-12));

  // A profile that does not end at zero is rejected as a usage error.
  write_file(dir / "bad.csv", "r,u\n0,1\n0.5,0.5\n1,0.25\n");
  CHECK(run("energy " + (dir / "bad.csv").string()) == 2);
  CHECK(run("energy " + (dir / "missing.csv").string()) == 2);
}

TEST_CASE("sweep writes one row per parameter cell") {
  fs::path dir = scratch("sweep");
  write_file(dir / "sweep.conf",
             "elements = 32\nlambda_min = 0\nlambda_max = 0\nlambda_count = 1\n"
             "gamma_min = 0\ngamma_max = 0\ngamma_count = 1\nrandom_starts = 2\n");
  int code = run("sweep --config " + (dir / "sweep.conf").string() + " --out " + dir.string());
  CHECK(code == 0);
  std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind("lambda,gamma,distinct,nontrivial,max_norm,min_residual,failed", 0) == 0);
  CHECK(count_data_lines(csv) == 1);
}

TEST_CASE("beta writes the estimate and its witness profile") {
  fs::path dir = scratch("beta");
  int code = run("beta --elements 32 --out " + dir.string());
  CHECK(code == 0);
  std::string csv = slurp(dir / "beta.csv");
  CHECK(csv.rfind("beta_hat,threshold,seed_ratio,seed_s0,seed_plateau_radius,seed_support_radius",
                  0) == 0);
  CHECK(count_data_lines(csv) == 1);
  std::string witness = slurp(dir / "witness.csv");
  CHECK(witness.rfind("r,u", 0) == 0);
  CHECK(count_data_lines(witness) == 33);
}

} // TEST_SUITE("cli")
