#pragma once

#include <cstddef>
#include <vector>

namespace splap {

/**
 * Partition 0 = r₀ < r₁ < … < r_M = R of the radial interval.  Element k is
 * [r_k, r_{k+1}].  The grading factor is the geometric ratio between the
 * lengths of consecutive elements walking toward the origin: grading < 1
 * concentrates elements near r = 0 where the singular weight lives.
 */
struct RadialGrid {
  std::vector<double> nodes; ///< strictly increasing, nodes.front() == 0, nodes.back() == R
  double grading = 1.0;      ///< geometric length ratio h_k / h_{k+1} (≤ 1)

  std::size_t elements() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  double radius() const { return nodes.back(); }
  double h(std::size_t k) const { return nodes[k + 1] - nodes[k]; }

  /// Number of stored coefficients of a function on this grid: the center node
  /// plus interior nodes.  The outer boundary value is pinned to 0.
  std::size_t dof_count() const { return elements(); }

  void validate() const; ///< throws std::invalid_argument on malformed node lists
};

/**
 * Continuous piecewise-linear radial function with u(R) = 0, the discrete
 * stand-in for a radially symmetric member of W₀^{1,p}(B(0,R)).  coeffs[i] is
 * the value at node r_i for i = 0..M−1; the value at r_M is identically zero
 * and not stored.
 */
struct DiscreteFunction {
  const RadialGrid* grid = nullptr;
  std::vector<double> coeffs;

  DiscreteFunction() = default;
  explicit DiscreteFunction(const RadialGrid& g)
      : grid(&g), coeffs(g.dof_count(), 0.0) {}
  DiscreteFunction(const RadialGrid& g, std::vector<double> c);

  /// Nodal value, including the implicit boundary zero at i = M.
  double node_value(std::size_t i) const {
    return i < coeffs.size() ? coeffs[i] : 0.0;
  }

  /// Slope on element k (constant per element).
  double slope(std::size_t k) const {
    return (node_value(k + 1) - node_value(k)) / grid->h(k);
  }

  /// Point evaluation by linear interpolation; r outside [0, R] is clamped.
  double operator()(double r) const;

  DiscreteFunction& operator+=(const DiscreteFunction& other);
  DiscreteFunction& operator-=(const DiscreteFunction& other);
  DiscreteFunction& operator*=(double alpha);

  friend DiscreteFunction operator+(DiscreteFunction a, const DiscreteFunction& b) { return a += b; }
  friend DiscreteFunction operator-(DiscreteFunction a, const DiscreteFunction& b) { return a -= b; }
  friend DiscreteFunction operator*(double alpha, DiscreteFunction a) { return a *= alpha; }
};

/**
 * Build a grid of M elements on [0, R] whose lengths decrease geometrically
 * toward the origin with the given ratio: h_k = grading · h_{k+1}.  grading = 1
 * gives the uniform mesh.
 *
 * Throws std::invalid_argument when M < 2, grading ∉ (0, 1], or R ≤ 0.
 */
RadialGrid make_grid(std::size_t M, double grading, double R_omega);

/// Grid with explicitly given nodes (first must be 0, strictly increasing).
RadialGrid grid_from_nodes(std::vector<double> nodes);

} // namespace splap
