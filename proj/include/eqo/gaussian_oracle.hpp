#ifndef EQO_GAUSSIAN_ORACLE_HPP
#define EQO_GAUSSIAN_ORACLE_HPP

// Verification on Gaussian wavefunctions psi(x) = exp(-1/2 x A x^T + b x^T + c).
//
// Two independent routes act with an EQO on a Gaussian:
//   * factored:  apply the three closed-form actions of the reordered product
//                (heat kernel, dilation, quadratic phase) and the prefactor;
//   * flow:      integrate psi' = A_hat psi, A_hat = 1/2 (x, d) R (x, d)^T, in
//                the Gaussian parameters (a matrix Riccati equation for A,
//                linear for b, scalar for c) with fixed-step RK4.
// Both must land on the same (A, b, c).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "eqo/matrix_kernel.hpp"
#include "eqo/reordering.hpp"
#include "eqo/types.hpp"

namespace eqo {

template <typename Real = double>
struct GaussianState {
  using Matrix = ComplexMatrix<Real>;
  using RowVector = ComplexRowVector<Real>;

  Matrix A;
  RowVector b;
  Complex<Real> c{};

  Eigen::Index n() const noexcept { return A.rows(); }

  /// Validating constructor: A symmetric with positive definite real part.
  static GaussianState make(Matrix a, RowVector b, Complex<Real> c, double symmetry_tol = Tolerances{}.symmetry) {
    if (a.rows() != a.cols() || a.rows() < 1) throw DimensionMismatch("GaussianState A", a.rows(), a.cols(), a.rows(), a.rows());
    if (b.size() != a.rows()) throw DimensionMismatch("GaussianState b vs A", 1, b.size(), a.rows(), a.cols());
    require_finite(a, "GaussianState A");
    require_finite(b, "GaussianState b");
    if (const auto dev = max_asymmetry(a); dev > symmetry_tol) throw AsymmetryError("GaussianState A", static_cast<double>(dev));
    const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> re = a.real();
    if (Eigen::LLT<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>>(re).info() != Eigen::Success)
      throw InvalidArgument("GaussianState: Re(A) must be positive definite");
    return {std::move(a), std::move(b), c};
  }

  /// A = I, b = 0, unit norm.
  static GaussianState vacuum(Eigen::Index n) {
    return {Matrix::Identity(n, n), RowVector::Zero(n),
            Complex<Real>(-Real(n) / Real(4) * std::log(std::numbers::pi_v<Real>))};
  }

  template <typename Derived>
  Complex<Real> log_value(const Eigen::MatrixBase<Derived>& x) const {
    const RowVector xr = x.template cast<Complex<Real>>();
    return -Real(0.5) * (xr * A * xr.transpose())(0, 0) + (b * xr.transpose())(0, 0) + c;
  }

  template <typename Derived>
  Complex<Real> value(const Eigen::MatrixBase<Derived>& x) const {
    return std::exp(log_value(x));
  }

  /// log of the L2 norm squared. Requires Re(A) positive definite.
  Real log_norm_squared() const {
    using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    const RealMatrix p = A.real();
    const Eigen::LLT<RealMatrix> llt(p);
    if (llt.info() != Eigen::Success) throw DomainError("norm undefined: Re(A) is not positive definite");
    const Eigen::Matrix<Real, Eigen::Dynamic, 1> q = b.real().transpose();
    const Real log_det = Real(2) * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return Real(2) * c.real() + Real(n()) / Real(2) * std::log(std::numbers::pi_v<Real>) - log_det / Real(2) +
           q.dot(llt.solve(q));
  }
};

/// Largest parameter difference; c is compared modulo 2 pi i, since it is a
/// log-amplitude.
template <typename Real>
Real state_distance(const GaussianState<Real>& s, const GaussianState<Real>& t) {
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  Complex<Real> dc = s.c - t.c;
  dc.imag(dc.imag() - two_pi * std::round(dc.imag() / two_pi));
  return std::max({max_abs(s.A - t.A), max_abs(s.b - t.b), std::abs(dc)});
}

/// exp(-1/2 x W x^T): A -> A + W.
template <typename Real>
GaussianState<Real> apply_quadratic_phase(const ComplexMatrix<Real>& w, GaussianState<Real> s) {
  if (w.rows() != s.n() || w.cols() != s.n()) throw DimensionMismatch("apply_quadratic_phase", w.rows(), w.cols(), s.n(), s.n());
  s.A += w;
  return s;
}

/// exp(x Y d^T) h(x) = h(x e^Y): A -> e^Y A e^{Y^T}, b -> b e^{Y^T}.
template <typename Real>
GaussianState<Real> apply_dilation(const ComplexMatrix<Real>& y, GaussianState<Real> s) {
  if (y.rows() != s.n() || y.cols() != s.n()) throw DimensionMismatch("apply_dilation", y.rows(), y.cols(), s.n(), s.n());
  const ComplexMatrix<Real> ey = expm(y);
  const ComplexMatrix<Real> a = ey * s.A * ey.transpose();
  s.A = (a + a.transpose()) / Real(2);
  s.b = s.b * ey.transpose();
  return s;
}

/// exp(1/2 d Z d^T), the n-mode heat kernel:
///   K = (I + Z A)^{-1},  A -> A K,  b -> b K,
///   c -> c + 1/2 b K Z b^T - 1/2 log det(I + Z A).
/// The log-determinant is summed eigenvalue by eigenvalue, which is the branch
/// continuous along the heat flow exp(s/2 d Z d^T), s in [0, 1].
template <typename Real>
GaussianState<Real> apply_heat(const ComplexMatrix<Real>& z, GaussianState<Real> s) {
  using Matrix = ComplexMatrix<Real>;
  const Eigen::Index n = s.n();
  if (z.rows() != n || z.cols() != n) throw DimensionMismatch("apply_heat", z.rows(), z.cols(), n, n);
  if (max_abs(z) == Real(0)) return s;
  const Matrix za = z * s.A;
  const Matrix m = Matrix::Identity(n, n) + za;
  Matrix k;
  try {
    k = mat_inv(m);
  } catch (const SingularMatrix& e) {
    throw SingularMatrix("apply_heat: I + Z A is singular, the Gaussian integral diverges", e.pivot());
  }
  const Eigen::ComplexEigenSolver<Matrix> es(za, false);
  Complex<Real> log_det(0);
  for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(Real(1) + es.eigenvalues()(i));

  const Matrix a = s.A * k;
  const Complex<Real> quad = (s.b * k * z * s.b.transpose())(0, 0);
  s.A = (a + a.transpose()) / Real(2);
  s.c += quad / Real(2) - log_det / Real(2);
  s.b = s.b * k;
  return s;
}

/// exp(d s^T) h(x) = h(x + s): b -> b - s A, c -> c - 1/2 s A s^T + b s^T.
template <typename Real>
GaussianState<Real> apply_shift(const ComplexRowVector<Real>& shift, GaussianState<Real> s) {
  if (shift.size() != s.n()) throw DimensionMismatch("apply_shift", 1, shift.size(), 1, s.n());
  s.c += -(shift * s.A * shift.transpose())(0, 0) / Real(2) + (s.b * shift.transpose())(0, 0);
  s.b -= shift * s.A;
  return s;
}

/// Right to left: heat(Z), dilation(Y), phase(W), then the e^{tr(Y)/2} prefactor.
template <typename Real>
GaussianState<Real> apply_factorization(const Factorization<Real>& f, GaussianState<Real> s) {
  s = apply_heat(f.Z, std::move(s));
  s = apply_dilation(f.Y, std::move(s));
  s = apply_quadratic_phase(f.W, std::move(s));
  s.c += f.Y.trace() / Real(2);
  return s;
}

/// d/dt of (A, b, c) when psi' = A_hat psi. With
/// A_hat = 1/2 x D1 x^T + x F d^T + 1/2 tr F + 1/2 d D2 d^T:
///   A' = -D1 + F A + A F^T - A D2 A
///   b' = b F^T - b D2 A
///   c' = 1/2 tr F + 1/2 b D2 b^T - 1/2 tr(D2 A)
template <typename Real>
GaussianState<Real> generator_rhs(const QuadraticGenerator<Real>& g, const GaussianState<Real>& s) {
  const auto& d1 = g.D1();
  const auto& d2 = g.D2();
  const auto& f = g.F();
  const ComplexMatrix<Real> d2a = d2 * s.A;
  GaussianState<Real> out;
  out.A = -d1 + f * s.A + s.A * f.transpose() - s.A * d2a;
  out.b = s.b * f.transpose() - s.b * d2a;
  out.c = (f.trace() + (s.b * d2 * s.b.transpose())(0, 0) - d2a.trace()) / Real(2);
  return out;
}

/// Integrates the Gaussian flow from tau = 0 to 1 with `steps` classical RK4 steps.
template <typename Real>
GaussianState<Real> evolve_generator(const QuadraticGenerator<Real>& g, GaussianState<Real> s, int steps,
                                     Real blowup = Real(1e8)) {
  if (steps < 1) throw InvalidArgument("evolve_generator: steps must be positive");
  if (g.n() != s.n()) throw DimensionMismatch("evolve_generator", g.n(), g.n(), s.n(), s.n());
  const Real h = Real(1) / Real(steps);
  auto axpy = [](const GaussianState<Real>& x, Real a, const GaussianState<Real>& d) {
    return GaussianState<Real>{x.A + a * d.A, x.b + a * d.b, x.c + a * d.c};
  };
  for (int k = 0; k < steps; ++k) {
    const auto k1 = generator_rhs(g, s);
    const auto k2 = generator_rhs(g, axpy(s, h / 2, k1));
    const auto k3 = generator_rhs(g, axpy(s, h / 2, k2));
    const auto k4 = generator_rhs(g, axpy(s, h, k3));
    s.A += h / 6 * (k1.A + 2 * k2.A + 2 * k3.A + k4.A);
    s.b += h / 6 * (k1.b + 2 * k2.b + 2 * k3.b + k4.b);
    s.c += h / 6 * (k1.c + Real(2) * k2.c + Real(2) * k3.c + k4.c);
    if (!s.A.allFinite() || !s.b.allFinite() || !std::isfinite(std::abs(s.c)) || max_abs(s.A) > blowup)
      throw FlowSingular("evolve_generator: Gaussian flow blew up", static_cast<double>((k + 1) * h));
  }
  s.A = (s.A + s.A.transpose()).eval() / Real(2);
  return s;
}

struct QuadratureGrid {
  double lo = -20;
  double hi = 20;
  int points = 4001;  // including both end points
};

/// Direct trapezoid evaluation of
///   exp(c0 d^2) h(x) = (4 pi c0)^{-1/2} Int exp(-(y - x)^2 / (4 c0)) h(y) dy
/// for a one-mode Gaussian h, at each requested x. Test oracle only.
template <typename Real>
std::vector<Complex<Real>> quadrature_heat_1d(Complex<Real> c0, const QuadratureGrid& grid,
                                              const GaussianState<Real>& s, const std::vector<Real>& xs) {
  if (s.n() != 1) throw InvalidArgument("quadrature_heat_1d: one-mode state required");
  if (grid.points < 3 || !(grid.hi > grid.lo)) throw InvalidArgument("quadrature_heat_1d: bad grid");
  const Complex<Real> kernel_rate = Real(1) / (Real(4) * c0);
  if (!(kernel_rate.real() > 0) || !((kernel_rate + s.A(0, 0) / Real(2)).real() > 0))
    throw DomainError("quadrature_heat_1d: integrand does not decay");
  const Real h = Real(grid.hi - grid.lo) / Real(grid.points - 1);
  const Complex<Real> norm = Real(1) / std::sqrt(Real(4) * std::numbers::pi_v<Real> * c0);
  const Complex<Real> a = s.A(0, 0), b = s.b(0);
  std::vector<Complex<Real>> out;
  out.reserve(xs.size());
  for (const Real x : xs) {
    auto log_integrand = [&](Real y) { return -(y - x) * (y - x) * kernel_rate - a * y * y / Real(2) + b * y + s.c; };
    Complex<Real> sum(0);
    Real peak = 0;
    for (int i = 0; i < grid.points; ++i) {
      const Real y = Real(grid.lo) + h * Real(i);
      const Complex<Real> v = std::exp(log_integrand(y));
      peak = std::max(peak, std::abs(v));
      sum += (i == 0 || i == grid.points - 1) ? v / Real(2) : v;
    }
    const Real tail = std::max(std::abs(std::exp(log_integrand(Real(grid.lo)))),
                               std::abs(std::exp(log_integrand(Real(grid.hi)))));
    if (tail > Real(1e-12) * peak) throw DomainError("quadrature_heat_1d: grid truncates the integrand tails");
    out.push_back(norm * h * sum);
  }
  return out;
}

}  // namespace eqo

#endif  // EQO_GAUSSIAN_ORACLE_HPP
