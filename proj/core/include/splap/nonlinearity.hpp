#pragma once

#include <functional>
#include <string>
#include <vector>

namespace splap {

/**
 * A scalar nonlinearity together with its antiderivative and declared growth
 * data.  kind distinguishes the forcing term f (growth |f(t)| ≤ c_f |t|^{p−1})
 * from the disturbance term g (growth |g(t)| ≤ c_g (1 + |t|^{q−1})).
 */
struct Nonlinearity {
  enum class Kind { forcing, disturbance };

  std::function<double(double)> eval; ///< f(t) or g(t)
  std::function<double(double)> anti; ///< F(t) = ∫₀ᵗ f, or G(t) = ∫₀ᵗ g; anti(0) = 0
  std::function<double(double)> deriv;///< f′(t) (may be empty when unused); used by Newton only
  Kind kind = Kind::forcing;
  double growth_c = 0.0; ///< declared c_f or c_g
  double growth_q = 0.0; ///< declared q (disturbance only)
  std::string name;
};

/// Parameters of the worked example pair (f, g).
struct ExampleParams {
  double r_ex = 1.0; ///< frequency of the sine branch of f, > 0
  double z = 1.0;    ///< crossover of g, > 0
  double q = 2.0;    ///< growth exponent of g, 1 < q < pn/(n−p)

  void validate(double p, int n) const; ///< throws std::invalid_argument
};

/**
 * The example forcing term
 *   f(t) = (π/2r)^{p−1} |sin(rt)|^p            for |t| ≤ π/(2r),
 *          (1+(π/2r)²) |t|^{p−1} / (1+t²)       for |t| > π/(2r).
 * f is even, so F(t) = ∫₀ᵗ f is odd.  F uses closed forms at p = 2 and cached
 * panel quadrature otherwise.  The declared growth constant c_f is the true
 * supremum of f(t)/|t|^{p−1}, located by bracketed maximization at
 * construction.  Construction fails if the two branches of f disagree at the
 * joint |t| = π/(2r) by more than 1e−12.
 */
Nonlinearity example_f(const ExampleParams& params, double p);

/**
 * The example disturbance term
 *   g(t) = 1 + |t|^{q−1}                        for |t| ≤ z,
 *          (1+z²)(1+z^{q−1}) / (1+t²)            for |t| > z.
 * g is even and G(t) = ∫₀ᵗ g is odd; both branches of G are closed-form
 * (power inside, arctangent outside).  The declared growth constant is
 * c_g = 1, which is pointwise valid: for |t| ≥ z the outer branch is at most
 * 1 + z^{q−1} ≤ 1 + |t|^{q−1} since q > 1.  Construction fails on a branch
 * mismatch at |t| = z beyond 1e−12.
 */
Nonlinearity example_g(const ExampleParams& params);

/// f ≡ 0 with F ≡ 0 (useful as a degenerate forcing or disturbance).
Nonlinearity zero_nonlinearity(Nonlinearity::Kind kind);

/// f(t) = |t|^{k−1} t, the homogeneous power of degree k ≥ 1.
Nonlinearity power_nonlinearity(double k, Nonlinearity::Kind kind);

/// Resolve a CLI-style name: "example_f", "example_g", "zero", "power:<k>".
Nonlinearity nonlinearity_by_name(const std::string& name, const ExampleParams& params,
                                  double p, Nonlinearity::Kind kind);

/** Result of one numeric condition audit, with the probe table for reporting. */
struct ConditionReport {
  bool passes = false;
  std::vector<double> sample_t;      ///< probe points
  std::vector<double> sample_value;  ///< audited quantity at each probe
  double t_star = 0.0;               ///< argmax (condition sup F > 0 check only)
  double value_star = 0.0;           ///< max F (sup check) or fitted constant (growth check)
};

/**
 * Audit of lim_{|t|→0} f(t)/|t|^{p−1} = 0: evaluates the ratio at t = ±10^{−k},
 * k = 1..8; passes iff the magnitude is non-increasing over the last four
 * decades and the final value is below 1e−3.  A finite probe cannot decide an
 * asymptotic statement; this detects gross violations.
 */
ConditionReport check_f1(const Nonlinearity& nl, double p);

/// Same audit at t = ±10^{+k}: lim_{|t|→∞} f(t)/|t|^{p−1} = 0.
ConditionReport check_f2(const Nonlinearity& nl, double p);

/**
 * Audit of sup_t F(t) > 0: scans F over a 401-point log grid
 * t ∈ ±[1e−3, 1e3]; passes iff the maximum is strictly positive.  Records the
 * argmax in t_star / value_star.
 */
ConditionReport check_f3(const Nonlinearity& nl);

/**
 * Audit of |g(t)| ≤ c_g (1 + |t|^{q−1}): samples the ratio on a log grid
 * t ∈ ±[0, 1e4]; passes iff the observed supremum is ≤ declared c_g·(1+1e−9).
 * value_star carries the fitted (observed) constant.
 */
ConditionReport check_g1(const Nonlinearity& nl);

} // namespace splap
