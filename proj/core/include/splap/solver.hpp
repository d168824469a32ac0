#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "splap/analysis.hpp"
#include "splap/functionals.hpp"
#include "splap/grid.hpp"
#include "splap/nonlinearity.hpp"
#include "splap/params.hpp"

namespace splap {

/** Tunables of the critical-point search. */
struct SolveConfig {
  double tol = 1e-8;            ///< ℓ² residual stopping tolerance
  std::size_t max_iter_descent = 500;
  std::size_t max_iter_newton = 50;
  double eps_reg = 1e-10;       ///< Hessian regularization of |u′|^{p−2}
  double backtrack = 0.5;       ///< line-search shrink factor, in (0,1)
  double sufficient_decrease = 1e-4; ///< Armijo constant, in (0, 0.5]
  double dist_tol = 1e-3;       ///< cluster radius scale (× max(1, ‖u‖*))
  std::uint64_t seed = 1;       ///< seed for random starts
  std::size_t random_starts = 4;
  bool enforce_condition_checks = true; ///< require (f1)(f2)(f3)(g1) before searching

  void validate() const; ///< throws std::invalid_argument
};

/// Thrown when an iteration fails to reach its tolerance; carries the best
/// residual so callers can report how close the run got.
struct NonConvergence : std::runtime_error {
  double residual;
  NonConvergence(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
};

/** One converged critical point with its bookkeeping. */
struct CriticalPoint {
  DiscreteFunction u;
  EnergyBreakdown energy;
  double residual = 0.0;  ///< ℓ² norm of E′(u), re-assembled after convergence
  double norm = 0.0;      ///< ‖u‖*
  std::size_t iterations = 0;
  std::size_t start_id = 0;
};

/** Result of a critical-point search at one (λ, γ). */
struct SolveReport {
  std::vector<CriticalPoint> solutions; ///< cluster representatives, by ascending norm
  std::size_t attempted_starts = 0;
  std::size_t converged_starts = 0;
  std::size_t distinct = 0;
  std::size_t nontrivial = 0; ///< clusters with ‖u‖* > 10·dist_tol
  double lambda = 0.0;
  double gamma = 0.0;
  double max_norm = 0.0;      ///< the reported uniform bound over found solutions
  double min_residual = 0.0;
};

/**
 * Invert Φ′: find u with Φ′(u) = w, the constructive counterpart of the
 * monotone-operator inverse.  Damped Newton with Armijo backtracking on the
 * strictly convex functional u ↦ Φ(u) − ⟨w, u⟩ (p = 2 solves the linear system
 * directly).  After convergence a monotonicity audit runs on the returned
 * point against random perturbations.
 *
 * Throws NonConvergence if the residual tolerance is not met within the
 * iteration budget.
 */
DiscreteFunction invert_phi_prime(const std::vector<double>& w, const Assembler& assembler,
                                  const SolveConfig& config);

/**
 * Multi-start search for critical points of E = Φ − λJ₁ − γJ₂.
 *
 * Start family: zero, a grid of trapezoid bumps at several amplitudes, the
 * given extra starts (e.g. a β witness), and seeded random vectors.  Each
 * start runs preconditioned descent with backtracking until ‖E′‖ ≤ 10·tol,
 * then regularized Newton to tol.  Saddle points between distinct minimizers
 * are hunted explicitly: the energy maximum along the segment joining two
 * distinct solutions seeds one more Newton run.  Converged points are
 * clustered by single linkage at dist_tol·max(1, ‖·‖*) and classified
 * trivial/nontrivial.
 */
SolveReport find_critical_points(const Assembler& assembler, const Nonlinearity& f,
                                 const Nonlinearity& g, const SolveConfig& config,
                                 const std::vector<DiscreteFunction>& extra_starts = {});

/** β estimate with its maximizing profile. */
struct BetaEstimate {
  double beta_hat = 0.0; ///< best observed J₁(u)/Φ(u)
  DiscreteFunction witness;
  double threshold = 0.0; ///< 1/β̂: λ must exceed this for the multiplicity regime

  /// The best trapezoid from the seeding grid (filled by estimate_beta, left
  /// default by improve_ratio).  Its positive ratio certifies β > 0 through a
  /// profile whose plateau/support/sup-norm conditions hold exactly at nodal
  /// level, independent of the ascent.
  BumpSpec seed_spec;
  DiscreteFunction seed_bump;
  double seed_ratio = 0.0;
};

/**
 * Locally maximize J₁/Φ from a given profile with Φ(start) > 0: alternates an
 * exact amplitude polish (golden section over the scaling ray s·u) with
 * preconditioned gradient ascent (∇(J₁/Φ) = (J₁′ − ratio·Φ′)/Φ, trial steps
 * sized relative to ‖u‖*) until neither improves the ratio.
 *
 * Throws std::runtime_error("no positive ratio") when the start has a
 * non-positive ratio.
 */
BetaEstimate improve_ratio(const Assembler& assembler, const Nonlinearity& f,
                           const DiscreteFunction& start);

/**
 * Estimate β = sup_{Φ>0} J₁/Φ: evaluates the ratio over a 5×5×5 grid of bump
 * specs (plateau radius × support radius × amplitude), then runs
 * improve_ratio from the best candidate.
 *
 * Throws std::runtime_error("no positive ratio") when no candidate achieves a
 * positive ratio — the practical signature of sup F ≤ 0.
 */
BetaEstimate estimate_beta(const Assembler& assembler, const Nonlinearity& f,
                           const SolveConfig& config);

/** One sweep cell outcome. */
struct SweepRow {
  double lambda = 0.0;
  double gamma = 0.0;
  std::size_t distinct = 0;
  std::size_t nontrivial = 0;
  double max_norm = 0.0;
  double min_residual = 0.0;
  bool failed = false; ///< the cell solve threw; other fields best-effort
};

/**
 * find_critical_points on every (λ, γ) cell.  Cells run in parallel when
 * hardware allows; rows are merged in grid order, so the table is
 * deterministic for a fixed seed regardless of scheduling.
 */
std::vector<SweepRow> sweep(const std::vector<double>& lambda_grid,
                            const std::vector<double>& gamma_grid,
                            const Assembler& assembler, const Nonlinearity& f,
                            const Nonlinearity& g, const SolveConfig& config);

} // namespace splap
