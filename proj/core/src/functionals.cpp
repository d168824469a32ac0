#include "splap/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace splap {

namespace {

void require_same_grid(const DiscreteFunction& u, const RadialGrid* grid) {
  if (u.grid != grid)
    throw std::invalid_argument("functionals: function lives on a different grid");
}

void require_finite(double value, double r) {
  if (!std::isfinite(value))
    throw std::domain_error("functionals: non-finite integrand at r = " + std::to_string(r));
}

} // namespace

Assembler::Assembler(const RadialGrid& grid, const EnergyParams& params,
                     std::size_t quad_order)
    : grid_(&grid), params_(params) {
  params_.validate();
  grid.validate();
  omega_ = params_.n * unit_ball_volume(params_.n);
  singular_exact_ = params_.p == 2.0;

  const std::size_t M = grid.elements();
  const double alpha_meas = params_.measure_exponent();
  const double alpha_sing = params_.singular_exponent();

  measure_moment_.resize(M);
  sing_moment_.reserve(M);
  mass_moment_.reserve(M);
  for (std::size_t k = 0; k < M; ++k) {
    measure_moment_[k] = power_moment(grid.nodes[k], grid.nodes[k + 1], alpha_meas, 0);
    sing_moment_.push_back(moment(grid, k, alpha_sing));
    mass_moment_.push_back(moment(grid, k, alpha_meas));
  }

  QuadratureRule rule = QuadratureRule::gauss(quad_order);
  points_per_element_ = rule.points.size();
  gauss_.reserve(M * points_per_element_);
  for (std::size_t k = 0; k < M; ++k) {
    const double a = grid.nodes[k], h = grid.h(k);
    for (std::size_t q = 0; q < points_per_element_; ++q) {
      GaussPoint gp;
      gp.r = a + h * rule.points[q];
      double w = h * rule.weights[q];
      gp.w_meas = w * std::pow(gp.r, alpha_meas);
      gp.w_sing = w * std::pow(gp.r, alpha_sing);
      gp.phi_l = 1.0 - rule.points[q];
      gp.phi_r = rule.points[q];
      gauss_.push_back(gp);
    }
  }

  // ω(W + μS): exact p = 2 stiffness plus exact singular mass.  For p = 2 this
  // is the matrix of Φ′; otherwise it preconditions descent directions.
  const std::size_t ndof = grid.dof_count();
  quad_part_ = SymTridiag::zeros(ndof);
  mass_ = SymTridiag::zeros(ndof);
  for (std::size_t k = 0; k < M; ++k) {
    const double h = grid.h(k);
    const double w_stiff = omega_ * measure_moment_[k] / (h * h);
    const auto& S = sing_moment_[k].matrix;
    const auto& Mm = mass_moment_[k].matrix;
    quad_part_.diag[k] += w_stiff + params_.mu * omega_ * S[0][0];
    mass_.diag[k] += omega_ * Mm[0][0];
    if (k + 1 < ndof) {
      quad_part_.diag[k + 1] += w_stiff + params_.mu * omega_ * S[1][1];
      quad_part_.off[k] += -w_stiff + params_.mu * omega_ * S[0][1];
      mass_.diag[k + 1] += omega_ * Mm[1][1];
      mass_.off[k] += omega_ * Mm[0][1];
    }
  }
}

double Assembler::norm_w_p(const DiscreteFunction& u) const {
  require_same_grid(u, grid_);
  const double p = params_.p;
  double acc = 0.0;
  for (std::size_t k = 0; k < grid_->elements(); ++k)
    acc += std::pow(std::fabs(u.slope(k)), p) * measure_moment_[k];
  return omega_ * acc;
}

double Assembler::norm_sing_p(const DiscreteFunction& u) const {
  require_same_grid(u, grid_);
  const double p = params_.p;
  double acc = 0.0;
  if (singular_exact_) {
    for (std::size_t k = 0; k < grid_->elements(); ++k) {
      const double ul = u.node_value(k), ur = u.node_value(k + 1);
      const auto& S = sing_moment_[k].matrix;
      acc += ul * ul * S[0][0] + 2.0 * ul * ur * S[0][1] + ur * ur * S[1][1];
    }
  } else {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < grid_->elements(); ++k) {
      const double ul = u.node_value(k), ur = u.node_value(k + 1);
      for (std::size_t q = 0; q < points_per_element_; ++q, ++idx) {
        const GaussPoint& gp = gauss_[idx];
        double v = ul * gp.phi_l + ur * gp.phi_r;
        acc += gp.w_sing * std::pow(std::fabs(v), p);
      }
    }
  }
  return omega_ * acc;
}

double Assembler::phi(const DiscreteFunction& u) const {
  return (norm_w_p(u) + params_.mu * norm_sing_p(u)) / params_.p;
}

double Assembler::norm_star(const DiscreteFunction& u) const {
  return std::pow(norm_w_p(u) + params_.mu * norm_sing_p(u), 1.0 / params_.p);
}

double Assembler::j_value(const DiscreteFunction& u, const Nonlinearity& nl) const {
  require_same_grid(u, grid_);
  double acc = 0.0;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < grid_->elements(); ++k) {
    const double ul = u.node_value(k), ur = u.node_value(k + 1);
    for (std::size_t q = 0; q < points_per_element_; ++q, ++idx) {
      const GaussPoint& gp = gauss_[idx];
      double F = nl.anti(ul * gp.phi_l + ur * gp.phi_r);
      require_finite(F, gp.r);
      acc += gp.w_meas * F;
    }
  }
  return omega_ * acc;
}

EnergyBreakdown Assembler::energy(const DiscreteFunction& u, const Nonlinearity& f,
                                  const Nonlinearity& g) const {
  EnergyBreakdown out;
  out.norm_w_p = norm_w_p(u);
  out.norm_sing_p = norm_sing_p(u);
  out.phi = (out.norm_w_p + params_.mu * out.norm_sing_p) / params_.p;
  out.j1 = j_value(u, f);
  out.j2 = j_value(u, g);
  out.e = out.phi - params_.lambda * out.j1 - params_.gamma * out.j2;
  return out;
}

std::vector<double> Assembler::phi_prime(const DiscreteFunction& u) const {
  require_same_grid(u, grid_);
  const double p = params_.p, mu = params_.mu;
  const std::size_t ndof = grid_->dof_count();
  std::vector<double> out(ndof, 0.0);

  for (std::size_t k = 0; k < grid_->elements(); ++k) {
    const double s = u.slope(k);
    // d/du of (1/p)|s|^p m_k: the slope enters with ∓1/h per endpoint.
    const double flux = std::pow(std::fabs(s), p - 1.0) * (s >= 0.0 ? 1.0 : -1.0) *
                        measure_moment_[k] / grid_->h(k);
    out[k] -= omega_ * flux;
    if (k + 1 < ndof) out[k + 1] += omega_ * flux;
  }

  if (mu != 0.0) {
    if (singular_exact_) {
      for (std::size_t k = 0; k < grid_->elements(); ++k) {
        const double ul = u.node_value(k), ur = u.node_value(k + 1);
        const auto& S = sing_moment_[k].matrix;
        out[k] += mu * omega_ * (S[0][0] * ul + S[0][1] * ur);
        if (k + 1 < ndof) out[k + 1] += mu * omega_ * (S[0][1] * ul + S[1][1] * ur);
      }
    } else {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < grid_->elements(); ++k) {
        const double ul = u.node_value(k), ur = u.node_value(k + 1);
        for (std::size_t q = 0; q < points_per_element_; ++q, ++idx) {
          const GaussPoint& gp = gauss_[idx];
          double v = ul * gp.phi_l + ur * gp.phi_r;
          double dv = std::pow(std::fabs(v), p - 1.0) * (v >= 0.0 ? 1.0 : -1.0);
          out[k] += mu * omega_ * gp.w_sing * dv * gp.phi_l;
          if (k + 1 < ndof) out[k + 1] += mu * omega_ * gp.w_sing * dv * gp.phi_r;
        }
      }
    }
  }
  return out;
}

std::vector<double> Assembler::j_prime(const DiscreteFunction& u,
                                       const Nonlinearity& nl) const {
  require_same_grid(u, grid_);
  const std::size_t ndof = grid_->dof_count();
  std::vector<double> out(ndof, 0.0);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < grid_->elements(); ++k) {
    const double ul = u.node_value(k), ur = u.node_value(k + 1);
    for (std::size_t q = 0; q < points_per_element_; ++q, ++idx) {
      const GaussPoint& gp = gauss_[idx];
      double fv = nl.eval(ul * gp.phi_l + ur * gp.phi_r);
      require_finite(fv, gp.r);
      out[k] += omega_ * gp.w_meas * fv * gp.phi_l;
      if (k + 1 < ndof) out[k + 1] += omega_ * gp.w_meas * fv * gp.phi_r;
    }
  }
  return out;
}

GradientVector Assembler::gradient(const DiscreteFunction& u, const Nonlinearity& f,
                                   const Nonlinearity& g) const {
  GradientVector out;
  out.phi_prime = phi_prime(u);
  out.j1_prime = j_prime(u, f);
  out.j2_prime = j_prime(u, g);
  const std::size_t ndof = out.phi_prime.size();
  out.e_prime.resize(ndof);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < ndof; ++i) {
    out.e_prime[i] = out.phi_prime[i] - params_.lambda * out.j1_prime[i] -
                     params_.gamma * out.j2_prime[i];
    norm2 += out.e_prime[i] * out.e_prime[i];
  }
  out.dual_norm = std::sqrt(norm2);
  return out;
}

SymTridiag Assembler::newton_matrix(const DiscreteFunction& u, const Nonlinearity& f,
                                    const Nonlinearity& g, double eps_reg) const {
  require_same_grid(u, grid_);
  if (!(eps_reg >= 0.0)) throw std::invalid_argument("newton_matrix: eps_reg must be >= 0");
  const double p = params_.p, mu = params_.mu;
  const double lambda = params_.lambda, gamma = params_.gamma;
  const std::size_t ndof = grid_->dof_count();
  SymTridiag H = SymTridiag::zeros(ndof);

  for (std::size_t k = 0; k < grid_->elements(); ++k) {
    const double s = u.slope(k), h = grid_->h(k);
    // (p−1)(s² + ε)^{(p−2)/2}: exactly 1 at p = 2, smoothed degeneracy above.
    const double coeff = (p - 1.0) * std::pow(s * s + eps_reg, (p - 2.0) / 2.0);
    const double w = omega_ * coeff * measure_moment_[k] / (h * h);
    H.diag[k] += w;
    if (k + 1 < ndof) {
      H.diag[k + 1] += w;
      H.off[k] -= w;
    }
  }

  if (mu != 0.0 && singular_exact_) {
    for (std::size_t k = 0; k < grid_->elements(); ++k) {
      const auto& S = sing_moment_[k].matrix;
      H.diag[k] += mu * omega_ * S[0][0];
      if (k + 1 < ndof) {
        H.diag[k + 1] += mu * omega_ * S[1][1];
        H.off[k] += mu * omega_ * S[0][1];
      }
    }
  }

  const bool sing_sampled = mu != 0.0 && !singular_exact_;
  if (sing_sampled || lambda != 0.0 || gamma != 0.0) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < grid_->elements(); ++k) {
      const double ul = u.node_value(k), ur = u.node_value(k + 1);
      for (std::size_t q = 0; q < points_per_element_; ++q, ++idx) {
        const GaussPoint& gp = gauss_[idx];
        const double v = ul * gp.phi_l + ur * gp.phi_r;
        // Pointwise second-derivative density at this quadrature node.
        double c = 0.0;
        if (sing_sampled)
          c += mu * (p - 1.0) * std::pow(v * v + eps_reg, (p - 2.0) / 2.0) * gp.w_sing;
        if (lambda != 0.0) c -= lambda * f.deriv(v) * gp.w_meas;
        if (gamma != 0.0) c -= gamma * g.deriv(v) * gp.w_meas;
        H.diag[k] += omega_ * c * gp.phi_l * gp.phi_l;
        if (k + 1 < ndof) {
          H.diag[k + 1] += omega_ * c * gp.phi_r * gp.phi_r;
          H.off[k] += omega_ * c * gp.phi_l * gp.phi_r;
        }
      }
    }
  }
  return H;
}

std::vector<double> Assembler::measure_load() const {
  const std::size_t ndof = grid_->dof_count();
  std::vector<double> out(ndof, 0.0);
  for (std::size_t k = 0; k < grid_->elements(); ++k) {
    out[k] += omega_ * mass_moment_[k].load[0];
    if (k + 1 < ndof) out[k + 1] += omega_ * mass_moment_[k].load[1];
  }
  return out;
}

EnergyBreakdown energy(const DiscreteFunction& u, const EnergyParams& params,
                       const Nonlinearity& f, const Nonlinearity& g) {
  return Assembler(*u.grid, params).energy(u, f, g);
}

GradientVector gradient(const DiscreteFunction& u, const EnergyParams& params,
                        const Nonlinearity& f, const Nonlinearity& g) {
  return Assembler(*u.grid, params).gradient(u, f, g);
}

SymTridiag newton_matrix(const DiscreteFunction& u, const EnergyParams& params,
                         const Nonlinearity& f, const Nonlinearity& g, double eps_reg) {
  return Assembler(*u.grid, params).newton_matrix(u, f, g, eps_reg);
}

double norm_star(const DiscreteFunction& u, const EnergyParams& params) {
  return Assembler(*u.grid, params).norm_star(u);
}

double mass_dual_norm(const std::vector<double>& grad, const Assembler& assembler) {
  std::vector<double> x = solve_sym_tridiag(assembler.mass_matrix(), grad);
  double s = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) s += grad[i] * x[i];
  return std::sqrt(std::max(0.0, s));
}

} // namespace splap
