#ifndef EQO_CLOSED_FORM_1D_HPP
#define EQO_CLOSED_FORM_1D_HPP

// Scalar formulas for one mode, U = exp[1/2 (a x^2 + c (x d + d x) + b d^2)].
// Everything depends on theta = sqrt(c^2 - ab) only through cosh(theta) and
// sinh(theta)/theta, both even, so the sign of the root is immaterial.

#include <cmath>
#include <complex>

#include "eqo/reordering.hpp"
#include "eqo/types.hpp"

namespace eqo {

template <typename Real = double>
struct Coefficients1D {
  Complex<Real> a{}, b{}, c{};
  Complex<Real> theta{};  // principal sqrt(c^2 - ab) unless overridden

  static Coefficients1D make(Complex<Real> a, Complex<Real> b, Complex<Real> c) {
    return {a, b, c, std::sqrt(c * c - a * b)};
  }

  Coefficients1D with_theta(Complex<Real> th) const { return {a, b, c, th}; }

  QuadraticGenerator<Real> generator() const {
    using M = ComplexMatrix<Real>;
    return QuadraticGenerator<Real>::assemble(M::Constant(1, 1, a), M::Constant(1, 1, c), M::Constant(1, 1, b));
  }
};

/// sinh(theta)/theta, with the Taylor series below |theta| = 1e-4.
template <typename Real>
Complex<Real> sinhc(Complex<Real> theta) {
  if (std::abs(theta) < Real(1e-4)) {
    const Complex<Real> t2 = theta * theta;
    return Real(1) + t2 / Real(6) + t2 * t2 / Real(120);
  }
  return std::sinh(theta) / theta;
}

template <typename Real>
ComplexMatrix<Real> transfer_1d(const Coefficients1D<Real>& k) {
  const Complex<Real> ch = std::cosh(k.theta);
  const Complex<Real> sc = sinhc(k.theta);
  ComplexMatrix<Real> t(2, 2);
  t << ch + k.c * sc, -k.a * sc, k.b * sc, ch - k.c * sc;
  return t;
}

/// One-mode factorization in the library's exp(-1/2 x W x) convention:
/// W = -a sinhc / T22, Y = -log T22, Z = b sinhc / T22, prefactor = e^{Y/2}.
template <typename Real>
Factorization<Real> decompose_1d(const Coefficients1D<Real>& k) {
  using M = ComplexMatrix<Real>;
  const Complex<Real> sc = sinhc(k.theta);
  const Complex<Real> t22 = std::cosh(k.theta) - k.c * sc;
  if (std::abs(t22) < Real(1e-13)) throw ZeroT22(static_cast<double>(std::abs(t22)));
  const Complex<Real> y = -std::log(t22);
  Factorization<Real> f;
  f.W = M::Constant(1, 1, -k.a * sc / t22);
  f.Y = M::Constant(1, 1, y);
  f.Z = M::Constant(1, 1, k.b * sc / t22);
  f.prefactor = std::exp(y / Real(2));
  return f;
}

/// True iff the transfer matrix is unchanged under theta -> -theta.
template <typename Real>
bool theta_branch_invariance_check(const Coefficients1D<Real>& k, Real tol = Real(1e-13)) {
  const auto plus = transfer_1d(k.with_theta(k.theta));
  const auto minus = transfer_1d(k.with_theta(-k.theta));
  return max_abs(plus - minus) <= tol * std::max(Real(1), max_abs(plus));
}

}  // namespace eqo

#endif  // EQO_CLOSED_FORM_1D_HPP
