#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splap/functionals.hpp"
#include "splap/grid.hpp"
#include "splap/nonlinearity.hpp"
#include "splap/params.hpp"

namespace splap {

/**
 * Radial trapezoid profile: value s0 on [0, r_in + delta·(R_out − r_in)],
 * linear descent to 0 at R_out, zero beyond.  The discrete realization of the
 * compactly supported plateau function whose existence powers the positivity
 * of sup J₁/Φ.
 */
struct BumpSpec {
  double s0 = 1.0;    ///< plateau value
  double r_in = 0.3;  ///< inner radius
  double R_out = 0.8; ///< support radius, < domain radius
  double delta = 0.9; ///< plateau fraction of [r_in, R_out], in (0, 1)

  double plateau_radius() const { return r_in + delta * (R_out - r_in); }
  void validate(double R_omega) const; ///< throws std::invalid_argument
};

/**
 * Build the trapezoid on the given grid.  The plateau and support radii snap
 * to the nearest grid nodes so the three defining conditions — support inside
 * B(0, R_out), value exactly s0 on the plateau, sup-norm equal to |s0| — hold
 * as exact statements about nodal values, not approximations.
 *
 * Throws std::invalid_argument if no node separates plateau from support
 * (the descent needs at least one element).
 */
DiscreteFunction build_bump(const BumpSpec& spec, const RadialGrid& grid);

/** Both sides of one pointwise vector inequality audit. */
struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool passes = false;
};

/**
 * The monotonicity inequality for the p-Laplacian vector field:
 *   (|x|^{p−2}x − |y|^{p−2}y)·(x − y) ≥ 2/(p(2^{p−1}−1)) |x−y|^p,  p ≥ 2.
 * passes iff lhs ≥ rhs − 1e−14·(1+|rhs|).  At p = 2 both sides are |x−y|².
 */
InequalityCheck chabrowski_check(const std::vector<double>& x,
                                 const std::vector<double>& y, double p);

/** Functional-level monotonicity audit data. */
struct MonotonicityGap {
  double pairing = 0.0;     ///< ⟨Φ′(u₁) − Φ′(u₂), u₁ − u₂⟩
  double lower_bound = 0.0; ///< a₁(‖u₁−u₂‖_W^p + μ‖u₁−u₂‖_sing^p)
  bool passes = false;      ///< pairing ≥ lower_bound − 1e−10 relative
};

/**
 * Checks ⟨Φ′(u₁)−Φ′(u₂), u₁−u₂⟩ ≥ a₁(‖u₁−u₂‖_W^p + μ‖u₁−u₂‖^p_sing) with the
 * Chabrowski constant a₁.  Both sides are assembled with the same quadrature,
 * so the discrete audit inherits the pointwise inequality exactly.
 */
MonotonicityGap monotonicity_gap(const DiscreteFunction& u1, const DiscreteFunction& u2,
                                 const Assembler& assembler);

/** J₁(t·u)/Φ(t·u) along a ray, for auditing the vanishing ratio limits. */
struct RatioProbe {
  std::vector<double> t_values;
  std::vector<double> ratios;
  double eta = 0.0; ///< reporting metadata only: the proof-side exponent
  bool passes = false;
};

/**
 * Ratios J₁(tu)/Φ(tu) at the given scalings of a normalized direction.
 * passes iff the ratio is ≤ 0.05 at both extreme decades t = 1e−3 and t = 1e3
 * (the numeric shadow of limsup_{‖u‖→0} ≤ 0 and limsup_{‖u‖→∞} ≤ 0).
 */
RatioProbe ratio_curve(const DiscreteFunction& direction, const Assembler& assembler,
                       const Nonlinearity& f, const std::vector<double>& t_values);

/** Midpoint-convexity audit data. */
struct MidpointCheck {
  double midpoint_norm = 0.0; ///< ‖(u+v)/2‖* after normalizing inputs
  double gap = 0.0;           ///< 1 − midpoint_norm
  bool passes = false;        ///< midpoint_norm < 1 − 1e−12
};

/**
 * Uniform-convexity spot check: normalizes u, v to ‖·‖* = 1, requires
 * ‖u − v‖* ≥ eps, and tests ‖(u+v)/2‖* < 1 − 1e−12.  Throws
 * std::invalid_argument if u = v after normalization.
 */
MidpointCheck midpoint_convexity_check(const DiscreteFunction& u, const DiscreteFunction& v,
                                       const Assembler& assembler, double eps);

/**
 * Triangle inequality for the combined metric
 *   d(x, y) = (d₁(x,y)^p + μ·d₂(x,y)^p)^{1/p},
 * d₁ the Sobolev seminorm metric and d₂ the singular-weight metric:
 * verifies d(u,w) ≤ d(u,v) + d(v,w) + 1e−12.
 */
bool metric_combination_check(const DiscreteFunction& u, const DiscreteFunction& v,
                              const DiscreteFunction& w, const Assembler& assembler);

/** One row of the verification battery. */
struct CheckRow {
  std::string name;
  std::uint64_t samples = 0;
  double worst_margin = 0.0; ///< most adverse slack observed (sign convention per check)
  bool passes = false;
  std::string detail;        ///< human-readable witness or context
};

/**
 * The full verification battery at the given configuration: every inequality
 * and identity audit with its sample budget.  Deterministic for a fixed seed.
 * Rows appear in a fixed order.
 */
std::vector<CheckRow> run_verification(const RadialGrid& grid, const EnergyParams& params,
                                       const Nonlinearity& f, const Nonlinearity& g,
                                       std::uint64_t seed);

/// Write battery rows as CSV (header: name,samples,worst_margin,pass).
void write_verification_csv(const std::vector<CheckRow>& rows, const std::string& path);

} // namespace splap
