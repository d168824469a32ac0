#include "splap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splap {

void RadialGrid::validate() const {
  if (nodes.size() < 3) throw std::invalid_argument("grid needs at least 2 elements");
  if (nodes.front() != 0.0) throw std::invalid_argument("first node must be exactly 0");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw std::invalid_argument("grid nodes must be strictly increasing");
  if (!(nodes.back() > 0.0) || !std::isfinite(nodes.back()))
    throw std::invalid_argument("outer radius must be positive and finite");
}

DiscreteFunction::DiscreteFunction(const RadialGrid& g, std::vector<double> c)
    : grid(&g), coeffs(std::move(c)) {
  if (coeffs.size() != g.dof_count())
    throw std::invalid_argument("coefficient count must equal element count");
}

double DiscreteFunction::operator()(double r) const {
  const auto& nodes = grid->nodes;
  if (r <= nodes.front()) return node_value(0);
  if (r >= nodes.back()) return 0.0;
  // Locate the element containing r.
  auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  std::size_t k = static_cast<std::size_t>(it - nodes.begin()) - 1;
  double t = (r - nodes[k]) / grid->h(k);
  return (1.0 - t) * node_value(k) + t * node_value(k + 1);
}

DiscreteFunction& DiscreteFunction::operator+=(const DiscreteFunction& other) {
  if (grid != other.grid) throw std::invalid_argument("mixing functions from different grids");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
  return *this;
}

DiscreteFunction& DiscreteFunction::operator-=(const DiscreteFunction& other) {
  if (grid != other.grid) throw std::invalid_argument("mixing functions from different grids");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= other.coeffs[i];
  return *this;
}

DiscreteFunction& DiscreteFunction::operator*=(double alpha) {
  for (double& c : coeffs) c *= alpha;
  return *this;
}

RadialGrid make_grid(std::size_t M, double grading, double R_omega) {
  if (M < 2) throw std::invalid_argument("make_grid: need at least 2 elements");
  if (!(grading > 0.0) || grading > 1.0)
    throw std::invalid_argument("make_grid: grading must lie in (0, 1]");
  if (!(R_omega > 0.0)) throw std::invalid_argument("make_grid: radius must be positive");

  RadialGrid g;
  g.grading = grading;
  g.nodes.resize(M + 1);
  g.nodes[0] = 0.0;
  if (grading == 1.0) {
    for (std::size_t k = 1; k < M; ++k)
      g.nodes[k] = R_omega * static_cast<double>(k) / static_cast<double>(M);
  } else {
    // Element lengths h_k ∝ grading^{M−1−k}: geometric decrease toward r = 0.
    // Normalize by the geometric sum (1 − grading^M)/(1 − grading).
    double scale = R_omega * (1.0 - grading) / (1.0 - std::pow(grading, static_cast<double>(M)));
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < M; ++k) {
      acc += scale * std::pow(grading, static_cast<double>(M - 1 - k));
      g.nodes[k + 1] = acc;
    }
  }
  g.nodes[M] = R_omega; // exact endpoint regardless of accumulation roundoff
  g.validate();
  return g;
}

RadialGrid grid_from_nodes(std::vector<double> nodes) {
  RadialGrid g;
  g.nodes = std::move(nodes);
  g.grading = 1.0;
  g.validate();
  return g;
}

} // namespace splap
