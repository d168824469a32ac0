#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "splap/grid.hpp"

namespace splap {

/**
 * Exact integrals of the weight r^α against the two hat functions of one
 * element [a, b]:
 *   matrix
 *[i][j] = ∫ r^α φ_i φ_j dr,   load[i] = ∫ r^α φ_i dr,
 * with φ_0 the falling hat ((b−r)/h) and φ_1 the rising hat ((r−a)/h).
 * These carry the radial measure and the singular Hardy weight into the
 * bilinear forms without any sampling error.
 */
struct ElementMoment {
  std::size_t element = 0;
  double alpha = 0.0;
  std::array<std::array<double, 2>, 2> matrix{};
  std::array<double, 2> load{};
};

/**
 * Closed-form element moments for any α > −1 (α ≤ −1 only ever touches
 * elements away from r = 0, where the integral is still proper).
 *
 * The implementation reduces everything to J_j = ∫_a^b (r−a)^j r^α dr for
 * j = 0, 1, 2 and picks one of four algebraically equivalent forms per case to
 * avoid catastrophic cancellation on thin or far-from-origin elements.
 *
 * Throws std::invalid_argument if α + 1 ≤ 0 on an element touching r = 0.
 */
ElementMoment moment(const RadialGrid& grid, std::size_t element, double alpha);

/// The raw power moment J_j = ∫_a^b (r−a)^j r^α dr (exposed for testing).
double power_moment(double a, double b, double alpha, int j);

/**
 * Gauss–Legendre rule on the reference element [0, 1].  Points are strictly
 * interior, so weighted integrands are never evaluated at r = 0.
 */
struct QuadratureRule {
  std::size_t order = 5;
  std::vector<double> points;  ///< in (0, 1)
  std::vector<double> weights; ///< positive, summing to 1

  static QuadratureRule gauss(std::size_t order);
};

/**
 * ∫₀^R r^α · integrand(r, u(r)) dr by the given rule applied per element.
 * The weight r^α is sampled together with the integrand, so the same positive
 * weights multiply both sides of any pointwise inequality — discrete audits of
 * integral inequalities inherit their pointwise versions exactly.
 *
 * Throws std::domain_error naming the radius if the integrand returns a
 * non-finite value.
 */
double integrate_nonlinear(const RadialGrid& grid, double alpha,
                           const std::function<double(double, double)>& integrand,
                           const DiscreteFunction& u, const QuadratureRule& rule);

} // namespace splap
