#include "splap/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace splap {

namespace {

bool is_small_nonneg_integer(double alpha) {
  double r = std::round(alpha);
  return r >= 0.0 && r <= 64.0 && std::fabs(alpha - r) == 0.0;
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

} // namespace

double power_moment(double a, double b, double alpha, int j) {
  if (!(b > a) || a < 0.0) throw std::invalid_argument("power_moment: need 0 <= a < b");
  if (j < 0) throw std::invalid_argument("power_moment: j must be >= 0");
  const double h = b - a;

  if (a == 0.0) {
    // (r − 0)^j r^α integrates to a single power.
    double c = alpha + j + 1.0;
    if (c <= 0.0) throw std::invalid_argument("power_moment: divergent at r = 0");
    return std::pow(b, c) / c;
  }

  if (is_small_nonneg_integer(alpha)) {
    // Substitute r = a + s and expand (a+s)^α: every term is positive.
    int ia = static_cast<int>(std::round(alpha));
    double sum = 0.0;
    for (int m = 0; m <= ia; ++m)
      sum += binomial(ia, m) * std::pow(a, ia - m) * std::pow(h, j + m + 1) / (j + m + 1.0);
    return sum;
  }

  if (a / h <= 2.0) {
    // Expand (r−a)^j in powers of r.  The alternating signs cancel at most a
    // factor (1 + a/h)^j ≤ 27 here, well within double headroom.  Each power
    // integral I_m = (b^c − a^c)/c is computed as a^c·expm1(c·log1p(h/a))/c to
    // dodge the subtraction of near-equal powers.
    double sum = 0.0;
    for (int m = 0; m <= j; ++m) {
      double c = alpha + m + 1.0;
      double Im;
      if (c == 0.0)
        Im = std::log1p(h / a);
      else
        Im = std::pow(a, c) * std::expm1(c * std::log1p(h / a)) / c;
      sum += binomial(j, m) * std::pow(-a, j - m) * Im;
    }
    return sum;
  }

  // Far from the origin relative to the element size: integrate by parts
  // repeatedly,
  //   J_j(β) = b^β h^{j+1}/(j+1) − (β/(j+1)) J_{j+1}(β−1),
  // giving a series whose term ratio tends to h/b < 1/3.
  double sum = 0.0;
  double coef = 1.0;
  double beta = alpha;
  int jj = j;
  for (int it = 0; it < 300; ++it) {
    double term = coef * std::pow(b, beta) * std::pow(h, jj + 1) / (jj + 1.0);
    sum += term;
    coef *= -beta / (jj + 1.0);
    beta -= 1.0;
    jj += 1;
    if (std::fabs(term) <= 1e-18 * std::fabs(sum) && it > 2) break;
  }
  return sum;
}

ElementMoment moment(const RadialGrid& grid, std::size_t element, double alpha) {
  if (element >= grid.elements()) throw std::invalid_argument("moment: element out of range");
  const double a = grid.nodes[element];
  const double b = grid.nodes[element + 1];
  const double h = b - a;
  if (a == 0.0 && alpha + 1.0 <= 0.0)
    throw std::invalid_argument("moment: weight exponent must exceed -1 at the origin");

  ElementMoment em;
  em.element = element;
  em.alpha = alpha;

  if (a > 0.0 && is_small_nonneg_integer(alpha)) {
    // Fully positive closed forms: expand (a+s)^α in s and use
    //   ∫₀¹ (1−x)² x^m dx = 2/((m+1)(m+2)(m+3)),
    //   ∫₀¹ (1−x) x^{m+1} dx = 1/((m+2)(m+3)),
    //   ∫₀¹ x^{m+2} dx = 1/(m+3),
    //   ∫₀¹ (1−x) x^m dx = 1/((m+1)(m+2)),  ∫₀¹ x^{m+1} dx = 1/(m+2).
    // No subtractions anywhere: every entry exact to roundoff.
    int ia = static_cast<int>(std::round(alpha));
    double ff = 0.0, fr = 0.0, rr = 0.0, vf = 0.0, vr = 0.0;
    for (int m = 0; m <= ia; ++m) {
      double c = binomial(ia, m) * std::pow(a, ia - m) * std::pow(h, m + 1);
      double m1 = m + 1.0, m2 = m + 2.0, m3 = m + 3.0;
      ff += c * 2.0 / (m1 * m2 * m3);
      fr += c / (m2 * m3);
      rr += c / m3;
      vf += c / (m1 * m2);
      vr += c / m2;
    }
    em.matrix = {{{ff, fr}, {fr, rr}}};
    em.load = {vf, vr};
    return em;
  }

  // Generic path: reduce to the raw moments J_j = ∫ (r−a)^j r^α dr.
  double J0 = power_moment(a, b, alpha, 0);
  double J1 = power_moment(a, b, alpha, 1);
  double J2 = power_moment(a, b, alpha, 2);
  double ff = J0 - 2.0 * J1 / h + J2 / (h * h);
  double fr = J1 / h - J2 / (h * h);
  double rr = J2 / (h * h);
  em.matrix = {{{ff, fr}, {fr, rr}}};
  em.load = {J0 - J1 / h, J1 / h};
  return em;
}

QuadratureRule QuadratureRule::gauss(std::size_t order) {
  if (order < 1 || order > 30)
    throw std::invalid_argument("gauss: order must be in [1, 30]");
  QuadratureRule rule;
  rule.order = order;
  rule.points.resize(order);
  rule.weights.resize(order);
  const std::size_t n = order;
  // Roots of the Legendre polynomial P_n on [−1,1] by Newton iteration from
  // Chebyshev-type initial guesses; weights 2/((1−x²) P_n′(x)²).
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) { p1 = x; }
      for (std::size_t k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    // Map to [0, 1] with weights summing to 1.
    rule.points[i] = 0.5 * (1.0 - x); // descending x maps to ascending points
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1 && n > 1) {
    // Odd rules have the midpoint node; the loop above computed it as the last
    // of the first half, but set it explicitly to avoid 2x roundoff drift.
    rule.points[n / 2] = 0.5;
  }
  if (n == 1) {
    rule.points[0] = 0.5;
    rule.weights[0] = 1.0;
  }
  return rule;
}

double integrate_nonlinear(const RadialGrid& grid, double alpha,
                           const std::function<double(double, double)>& integrand,
                           const DiscreteFunction& u, const QuadratureRule& rule) {
  double total = 0.0;
  const std::size_t M = grid.elements();
  for (std::size_t k = 0; k < M; ++k) {
    double a = grid.nodes[k], h = grid.h(k);
    double ul = u.node_value(k), ur = u.node_value(k + 1);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      double t = rule.points[q];
      double r = a + h * t;
      double val = integrand(r, (1.0 - t) * ul + t * ur);
      if (!std::isfinite(val))
        throw std::domain_error("integrate_nonlinear: non-finite integrand at r = " +
                                std::to_string(r));
      acc += rule.weights[q] * std::pow(r, alpha) * val;
    }
    total += h * acc;
  }
  return total;
}

} // namespace splap
