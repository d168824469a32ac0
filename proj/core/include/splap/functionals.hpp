#pragma once

#include <cstddef>
#include <vector>

#include "splap/grid.hpp"
#include "splap/nonlinearity.hpp"
#include "splap/params.hpp"
#include "splap/quadrature.hpp"
#include "splap/tridiag.hpp"

namespace splap {

/** Values of the energy pieces at one function, all including the sphere-area
 *  prefactor so they equal the full n-dimensional integrals. */
struct EnergyBreakdown {
  double phi = 0.0;         ///< Φ(u) = (norm_w_p + μ·norm_sing_p)/p
  double j1 = 0.0;          ///< J₁(u) = ∫ F(u) dx
  double j2 = 0.0;          ///< J₂(u) = ∫ G(u) dx
  double e = 0.0;           ///< Φ − λJ₁ − γJ₂
  double norm_w_p = 0.0;    ///< ∫ |∇u|^p dx
  double norm_sing_p = 0.0; ///< ∫ |u|^p / |x|^p dx
};

/** The assembled Gâteaux derivatives against the hat basis. */
struct GradientVector {
  std::vector<double> e_prime;   ///< ⟨E′(u), φ_i⟩
  std::vector<double> phi_prime; ///< ⟨Φ′(u), φ_i⟩
  std::vector<double> j1_prime;  ///< ⟨J₁′(u), φ_i⟩
  std::vector<double> j2_prime;  ///< ⟨J₂′(u), φ_i⟩
  double dual_norm = 0.0;        ///< ℓ² norm of e_prime (the solver's stopping metric)
};

/**
 * Precomputed per-grid assembly tables.  Hot paths (solver line searches,
 * random audits) construct one Assembler per (grid, params) and reuse it; the
 * free functions below build a throwaway instance for one-off evaluations.
 *
 * Quadrature policy: the |∇u|^p term integrates exactly for every p because
 * hat slopes are constant per element and the measure moment ∫ r^{n−1} is
 * closed-form.  The singular term uses exact α = n−1−p moment matrices when
 * p = 2 (it is then bilinear) and the positive Gauss rule otherwise; F/G terms
 * always use the Gauss rule.  Energy, gradient, and Hessian share one rule, so
 * the gradient is the exact derivative of the computed energy and pointwise
 * inequalities between integrands survive discretization term by term.
 */
class Assembler {
public:
  Assembler(const RadialGrid& grid, const EnergyParams& params,
            std::size_t quad_order = 5);

  const RadialGrid& grid() const { return *grid_; }
  const EnergyParams& params() const { return params_; }
  double sphere_area() const { return omega_; }

  double norm_w_p(const DiscreteFunction& u) const;
  double norm_sing_p(const DiscreteFunction& u) const;
  double phi(const DiscreteFunction& u) const;
  double norm_star(const DiscreteFunction& u) const;

  double j_value(const DiscreteFunction& u, const Nonlinearity& nl) const;

  EnergyBreakdown energy(const DiscreteFunction& u, const Nonlinearity& f,
                         const Nonlinearity& g) const;

  std::vector<double> phi_prime(const DiscreteFunction& u) const;
  std::vector<double> j_prime(const DiscreteFunction& u, const Nonlinearity& nl) const;
  GradientVector gradient(const DiscreteFunction& u, const Nonlinearity& f,
                          const Nonlinearity& g) const;

  /// Second variation of E at u, with |u′|^{p−2} regularized to
  /// (u′² + eps_reg)^{(p−2)/2}.  Pass λ = γ = 0 in params for the Φ part alone.
  SymTridiag newton_matrix(const DiscreteFunction& u, const Nonlinearity& f,
                           const Nonlinearity& g, double eps_reg) const;

  /// The p = 2 principal part ω(W + μS): exact stiffness plus singular mass.
  /// For p = 2 this IS the matrix of Φ′; for p > 2 it serves as an SPD
  /// preconditioner for descent.
  const SymTridiag& quadratic_part() const { return quad_part_; }

  /// b_i = ω ∫ φ_i r^{n−1} dr: the load of the constant function 1.
  std::vector<double> measure_load() const;

  /// Mass matrix ω ∫ φ_i φ_j r^{n−1} dr (exact moments), for the documented
  /// mass-sense dual norm option.
  const SymTridiag& mass_matrix() const { return mass_; }

private:
  struct GaussPoint {
    double r;       ///< physical radius
    double w_meas;  ///< weight × r^{n−1}
    double w_sing;  ///< weight × r^{n−1−p}
    double phi_l;   ///< falling hat value
    double phi_r;   ///< rising hat value
  };

  const RadialGrid* grid_;
  EnergyParams params_;
  double omega_; ///< sphere_area = n · ball_volume
  std::vector<double> measure_moment_;        ///< m_k = ∫_elem r^{n−1} dr
  std::vector<ElementMoment> sing_moment_;    ///< exact α = n−1−p element moments
  std::vector<ElementMoment> mass_moment_;    ///< exact α = n−1 element moments
  std::vector<GaussPoint> gauss_;             ///< rule points, element-major
  std::size_t points_per_element_;
  SymTridiag quad_part_;
  SymTridiag mass_;
  bool singular_exact_; ///< p == 2: use sing_moment_ instead of sampling
};

/// One-off wrappers with the module-level signatures.
EnergyBreakdown energy(const DiscreteFunction& u, const EnergyParams& params,
                       const Nonlinearity& f, const Nonlinearity& g);
GradientVector gradient(const DiscreteFunction& u, const EnergyParams& params,
                        const Nonlinearity& f, const Nonlinearity& g);
SymTridiag newton_matrix(const DiscreteFunction& u, const EnergyParams& params,
                         const Nonlinearity& f, const Nonlinearity& g, double eps_reg);

/// ‖u‖* = (p·Φ(u))^{1/p}; with μ = 0 this is the W₀^{1,p} seminorm.
double norm_star(const DiscreteFunction& u, const EnergyParams& params);

/// Dual norm of an assembled gradient in the mass-matrix sense:
/// √(gᵀ M⁻¹ g) with M the r^{n−1}-weighted mass matrix.
double mass_dual_norm(const std::vector<double>& grad, const Assembler& assembler);

} // namespace splap
