#ifndef EQO_APPENDIX_CHECKS_HPP
#define EQO_APPENDIX_CHECKS_HPP

// Numerical checks that the reordered product carries no stray c-number.
//
// Along T(t) = exp(t R Sigma^{-1}) the matrix element v(t) = <f| e^{t A_hat} |g>
// (x-eigenstate <f|, d-eigenstate |g>, both with eigenvalue zero) obeys
//   v'(t) = -1/2 v(t) tr[(D2 T12(t) - F^T T22(t)) T22(t)^{-1}],  v(0) = 1,
// whose solution is exp(-1/2 tr log T22(t)). At t = 1 this must equal the
// prefactor e^{tr(Y)/2} of the factorization.

#include <cmath>
#include <algorithm>
#include <complex>
#include <numbers>
#include <vector>

#include "eqo/matrix_kernel.hpp"
#include "eqo/reordering.hpp"

namespace eqo {

template <typename Real = double>
struct OdeTrace {
  std::vector<Real> times;
  std::vector<Complex<Real>> v_values;
  // -1/2 tr log T22(t), continued along the path.
  std::vector<Complex<Real>> T22_logdet;
};

template <typename Real = double>
struct VOdeResult {
  Complex<Real> v_final;
  Complex<Real> closed_form;
  Real residual;
  /// exp(tr(Y)/2) with the principal Y used by gauss_decompose; equals
  /// closed_form unless the path of det T22 winds around the origin.
  Complex<Real> principal_closed_form;
  OdeTrace<Real> trace;
};

/// max_t |(T(t+h) - T(t-h)) / 2h - R Sigma^{-1} T(t)| over t = h, ..., 1 - h.
template <typename Real>
Real t_matrix_ode_residual(const QuadraticGenerator<Real>& g, int steps) {
  if (steps < 2) throw InvalidArgument("t_matrix_ode_residual: need at least 2 steps");
  const ComplexMatrix<Real> k = g.flow_matrix();
  const Real h = Real(1) / Real(steps);
  std::vector<ComplexMatrix<Real>> t_at(steps + 1);
  for (int i = 0; i <= steps; ++i) t_at[i] = expm(ComplexMatrix<Real>(Real(i) * h * k));
  Real worst = 0;
  for (int i = 1; i < steps; ++i) {
    const ComplexMatrix<Real> fd = (t_at[i + 1] - t_at[i - 1]) / (Real(2) * h);
    worst = std::max(worst, max_abs(fd - k * t_at[i]));
  }
  return worst;
}

/// RK4 integration of the v(t) ODE on [0, 1] against the path-continued
/// closed form. Throws SingularMatrix if T22(t) becomes singular on the grid.
template <typename Real>
VOdeResult<Real> v_ode_check(const QuadraticGenerator<Real>& g, int steps,
                             double rel_pivot_tol = Tolerances{}.decompose_pivot) {
  using Matrix = ComplexMatrix<Real>;
  if (steps < 1) throw InvalidArgument("v_ode_check: steps must be positive");
  const Matrix k = g.flow_matrix();
  const Real h = Real(1) / Real(steps);

  auto transfer_at = [&](Real t) { return TransferMatrix<Real>::from_full(expm(Matrix(t * k))); };
  // -1/2 tr[(D2 T12 - F^T T22) T22^{-1}]
  auto rate = [&](Real t) {
    const auto tm = transfer_at(t);
    Eigen::PartialPivLU<Matrix> lu;
    try {
      lu = detail::factor_t22(tm, rel_pivot_tol);
    } catch (const SingularMatrix& e) {
      throw SingularMatrix("v_ode_check: T22(t) singular at t = " + std::to_string(static_cast<double>(t)), e.pivot());
    }
    const Matrix dt22 = g.D2() * tm.T12 - g.F().transpose() * tm.T22;
    return -(dt22 * lu.inverse()).trace() / Real(2);
  };

  VOdeResult<Real> r;
  auto& tr = r.trace;
  Complex<Real> v(1);
  Complex<Real> log_det(0);  // tr log T22(t), continued
  Complex<Real> prev_det(1);
  tr.times.push_back(0);
  tr.v_values.push_back(v);
  tr.T22_logdet.push_back(0);
  for (int i = 0; i < steps; ++i) {
    const Real t = Real(i) * h;
    const Complex<Real> k1 = rate(t) * v;
    const Complex<Real> k2 = rate(t + h / 2) * (v + h / 2 * k1);
    const Complex<Real> k3 = rate(t + h / 2) * (v + h / 2 * k2);
    const Complex<Real> k4 = rate(t + h) * (v + h * k3);
    v += h / 6 * (k1 + Real(2) * k2 + Real(2) * k3 + k4);

    const Complex<Real> det = mat_det(transfer_at(t + h).T22);
    const Complex<Real> dlog = std::log(det / prev_det);
    // A phase jump this large within one step means det T22 went through (or
    // next to) zero between grid points.
    if (std::abs(dlog.imag()) > std::numbers::pi_v<Real> / 2)
      throw SingularMatrix("v_ode_check: det T22(t) crosses zero near t = " + std::to_string(static_cast<double>(t + h / 2)),
                           static_cast<double>(std::min(std::abs(det), std::abs(prev_det))));
    log_det += dlog;
    prev_det = det;
    tr.times.push_back(t + h);
    tr.v_values.push_back(v);
    tr.T22_logdet.push_back(-log_det / Real(2));
  }
  r.v_final = v;
  r.closed_form = std::exp(-log_det / Real(2));
  r.residual = std::abs(r.v_final - r.closed_form);
  const Matrix t22 = transfer_at(Real(1)).T22;
  r.principal_closed_form = std::exp(-logm(Matrix(t22.transpose())).trace() / Real(2));
  return r;
}

template <typename Real = double>
struct PrefactorComparison {
  Complex<Real> v_final;
  Complex<Real> prefactor;
  Real difference;
  bool consistent;
};

template <typename Real>
PrefactorComparison<Real> compare_prefactor(const QuadraticGenerator<Real>& g, int steps = 4000, Real tol = Real(1e-7)) {
  const auto f = decompose(g);
  const auto v = v_ode_check(g, steps);
  const Real diff = std::abs(v.v_final - f.prefactor);
  return {v.v_final, f.prefactor, diff, diff < tol};
}

/// True iff v(1) from the ODE matches the factorization prefactor to `tol`.
template <typename Real>
bool prefactor_consistency(const QuadraticGenerator<Real>& g, int steps = 4000, Real tol = Real(1e-7)) {
  return compare_prefactor(g, steps, tol).consistent;
}

}  // namespace eqo

#endif  // EQO_APPENDIX_CHECKS_HPP
