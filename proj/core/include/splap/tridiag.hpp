#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace splap {

/**
 * Symmetric tridiagonal matrix stored as diagonal + subdiagonal.  This is the
 * only matrix shape the radial discretization produces: hat functions overlap
 * only with their neighbours.
 */
struct SymTridiag {
  std::vector<double> diag; ///< d[i], i = 0..n-1
  std::vector<double> off;  ///< e[i] couples rows i and i+1, i = 0..n-2

  std::size_t size() const { return diag.size(); }

  static SymTridiag zeros(std::size_t n) {
    SymTridiag t;
    t.diag.assign(n, 0.0);
    t.off.assign(n > 0 ? n - 1 : 0, 0.0);
    return t;
  }

  /// y = A x
  std::vector<double> apply(const std::vector<double>& x) const {
    const std::size_t n = size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double v = diag[i] * x[i];
      if (i > 0) v += off[i - 1] * x[i - 1];
      if (i + 1 < n) v += off[i] * x[i + 1];
      y[i] = v;
    }
    return y;
  }

  /// xᵀ A x without forming A x.
  double quadratic_form(const std::vector<double>& x) const {
    const std::size_t n = size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += diag[i] * x[i] * x[i];
      if (i + 1 < n) s += 2.0 * off[i] * x[i] * x[i + 1];
    }
    return s;
  }

  SymTridiag& add_scaled(const SymTridiag& other, double alpha) {
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] += alpha * other.diag[i];
    for (std::size_t i = 0; i < off.size(); ++i) off[i] += alpha * other.off[i];
    return *this;
  }
};

/**
 * Solve A x = b for symmetric tridiagonal A via LDLᵀ factorization (Thomas
 * algorithm specialized to the symmetric case).  No pivoting: every matrix we
 * solve is positive definite (stiffness + regularized Hessian), for which LDLᵀ
 * is unconditionally stable.  Throws if a pivot collapses to zero, which for
 * our matrices signals a genuinely singular system, not roundoff.
 */
inline std::vector<double> solve_sym_tridiag(const SymTridiag& A,
                                             const std::vector<double>& b) {
  const std::size_t n = A.size();
  if (b.size() != n) throw std::invalid_argument("tridiag solve: size mismatch");
  if (n == 0) return {};
  std::vector<double> d(n), l(n > 1 ? n - 1 : 0), x(b);
  d[0] = A.diag[0];
  if (d[0] == 0.0) throw std::runtime_error("tridiag solve: zero pivot at row 0");
  for (std::size_t i = 1; i < n; ++i) {
    l[i - 1] = A.off[i - 1] / d[i - 1];
    d[i] = A.diag[i] - l[i - 1] * A.off[i - 1];
    if (d[i] == 0.0) throw std::runtime_error("tridiag solve: zero pivot");
  }
  // Forward substitution L z = b (z overwrites x).
  for (std::size_t i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
  // Diagonal scaling.
  for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
  // Back substitution Lᵀ x = z.
  for (std::size_t i = n - 1; i > 0; --i) x[i - 1] -= l[i - 1] * x[i];
  return x;
}

} // namespace splap
