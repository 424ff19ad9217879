#ifndef EQO_MATRIX_KERNEL_HPP
#define EQO_MATRIX_KERNEL_HPP

// Dense complex matrix arithmetic and matrix functions.
//
// All functions are pure and accept any Eigen expression with a complex
// scalar. Logarithm and square root always return the principal branch; an
// eigenvalue on the closed negative real axis is reported as BranchCut rather
// than silently mapped to one side of the cut.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "eqo/types.hpp"

namespace eqo {

template <typename Derived>
using PlainOf = typename Derived::PlainObject;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

/// Largest entry magnitude.
template <typename Derived>
RealOf<Derived> max_abs(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return RealOf<Derived>(0);
  return a.cwiseAbs().maxCoeff();
}

/// Induced infinity norm (max absolute row sum).
template <typename Derived>
RealOf<Derived> inf_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return RealOf<Derived>(0);
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

/// max |a - a^T|; zero for an exactly symmetric matrix.
template <typename Derived>
RealOf<Derived> max_asymmetry(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<RealOf<Derived>>::infinity();
  return max_abs(a - a.transpose());
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const std::string& what) {
  if (a.rows() != a.cols()) throw DimensionMismatch(what + " needs a square matrix", a.rows(), a.cols(), a.cols(), a.rows());
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const std::string& what) {
  if (!a.allFinite()) throw InvalidArgument(what + " contains a non-finite entry");
}

template <typename DerivedA, typename DerivedB>
PlainOf<DerivedA> mat_mul(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("mat_mul", a.rows(), a.cols(), b.rows(), b.cols());
  return a * b;
}

/// Inverse through partially pivoted LU. Throws SingularMatrix when the
/// smallest pivot falls below `rel_pivot_tol * ||a||_inf`.
template <typename Derived>
PlainOf<Derived> mat_inv(const Eigen::MatrixBase<Derived>& a, double rel_pivot_tol = Tolerances{}.inverse_pivot) {
  require_square(a, "mat_inv");
  const PlainOf<Derived> m = a;
  const Eigen::PartialPivLU<PlainOf<Derived>> lu(m);
  const auto min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  const auto scale = inf_norm(m);
  if (!(min_pivot > rel_pivot_tol * scale) || scale == 0)
    throw SingularMatrix("mat_inv: matrix is singular to working tolerance", static_cast<double>(min_pivot));
  return lu.inverse();
}

template <typename Derived>
typename Derived::Scalar mat_det(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "mat_det");
  using Scalar = typename Derived::Scalar;
  if (a.rows() == 0) return Scalar(1);
  if (a.rows() == 1) return a(0, 0);
  if (a.rows() == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const PlainOf<Derived> m = a;
  return Eigen::PartialPivLU<PlainOf<Derived>>(m).determinant();
}

template <typename Derived>
PlainOf<Derived> expm(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "expm");
  const PlainOf<Derived> m = a;
  return m.exp();
}

namespace detail {

// Principal log/sqrt are undefined when an eigenvalue sits on (-inf, 0].
// "On" means within a relative distance of the cut that floating point cannot
// resolve into a definite side.
template <typename Matrix>
void check_principal_domain(const Matrix& m, const std::string& what) {
  using Real = typename Eigen::NumTraits<typename Matrix::Scalar>::Real;
  if (m.rows() == 0) return;
  const Real scale = std::max(Real(1), inf_norm(m));
  const Real eps = Real(1e-13) * scale;
  auto offending = [&](const std::complex<Real>& ev) {
    return std::abs(ev) <= eps || (ev.real() <= 0 && std::abs(ev.imag()) <= eps);
  };
  if (m.rows() == 1) {
    if (offending(m(0, 0))) throw BranchCut(what, std::complex<double>(m(0, 0)));
    return;
  }
  const Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const auto ev = es.eigenvalues()(k);
    if (offending(ev)) throw BranchCut(what, std::complex<double>(ev));
  }
}

}  // namespace detail

/// Principal matrix logarithm: eigenvalue imaginary parts of the result lie
/// in (-pi, pi).
template <typename Derived>
PlainOf<Derived> logm(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "logm");
  const PlainOf<Derived> m = a;
  detail::check_principal_domain(m, "logm");
  if (m.rows() == 1) return PlainOf<Derived>::Constant(1, 1, std::log(m(0, 0)));
  return m.log();
}

/// Principal square root: eigenvalues of the result in the open right half-plane.
template <typename Derived>
PlainOf<Derived> sqrtm(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "sqrtm");
  const PlainOf<Derived> m = a;
  detail::check_principal_domain(m, "sqrtm");
  if (m.rows() == 1) return PlainOf<Derived>::Constant(1, 1, std::sqrt(m(0, 0)));
  return m.sqrt();
}

enum class MatrixFn { Cos, Sin, Tan, Cosh, Sinh };

inline const char* to_string(MatrixFn fn) {
  switch (fn) {
    case MatrixFn::Cos: return "cos";
    case MatrixFn::Sin: return "sin";
    case MatrixFn::Tan: return "tan";
    case MatrixFn::Cosh: return "cosh";
    case MatrixFn::Sinh: return "sinh";
  }
  return "?";
}

/// Trigonometric and hyperbolic functions of a square matrix. tan(a) is
/// sin(a) cos(a)^{-1} and raises Singularity where cos(a) is singular.
template <typename Derived>
PlainOf<Derived> analytic_matrix_fn(const Eigen::MatrixBase<Derived>& a, MatrixFn fn) {
  require_square(a, std::string("analytic_matrix_fn(") + to_string(fn) + ")");
  const PlainOf<Derived> m = a;
  switch (fn) {
    case MatrixFn::Cos: return m.cos();
    case MatrixFn::Sin: return m.sin();
    case MatrixFn::Cosh: return m.cosh();
    case MatrixFn::Sinh: return m.sinh();
    case MatrixFn::Tan: {
      // Pivots are judged against max(1, |cos|, |sin|): near a pole cos(a)
      // is small in every entry, so a test relative to |cos| alone never fires.
      const PlainOf<Derived> c = m.cos();
      const PlainOf<Derived> s = m.sin();
      const Eigen::PartialPivLU<PlainOf<Derived>> lu(c);
      const auto min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
      const auto scale = std::max({RealOf<Derived>(1), inf_norm(c), inf_norm(s)});
      if (!(min_pivot > RealOf<Derived>(Tolerances{}.inverse_pivot) * scale))
        throw Singularity("tan: cos(a) is singular (smallest pivot magnitude " +
                          std::to_string(static_cast<double>(min_pivot)) + ")");
      return s * lu.inverse();
    }
  }
  return m;
}

}  // namespace eqo

#endif  // EQO_MATRIX_KERNEL_HPP
