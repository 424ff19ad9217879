#ifndef EQO_REORDERING_HPP
#define EQO_REORDERING_HPP

// Reordering of an n-mode exponential quadratic operator
//
//   U = exp[ 1/2 (x, d) R (x, d)^T ],   R = [[D1, F], [F^T, D2]],
//
// into  U = e^{tr(Y)/2} exp(-1/2 x W x^T) exp(x Y d^T) exp(1/2 d Z d^T).
//
// The procedure: assemble R, take T = exp(R Sigma^{-1}) (the linear map that
// conjugation by U induces on (x, d)), and read W, Y, Z off the block Gauss
// decomposition
//
//   T = [[I, W], [0, I]] [[e^Y, 0], [0, e^{-Y^T}]] [[I, 0], [Z, I]].
//
// Y = -log(T22^T) uses the principal logarithm, and the scalar prefactor is
// always exp(tr(Y)/2) so that it sits on the same branch as Y.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "eqo/matrix_kernel.hpp"
#include "eqo/types.hpp"

namespace eqo {

/// Symplectic form [[0, I], [-I, 0]] of size 2n.
template <typename Real = double>
ComplexMatrix<Real> sigma(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("sigma: mode count must be positive");
  ComplexMatrix<Real> s = ComplexMatrix<Real>::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n).setIdentity();
  s.bottomLeftCorner(n, n) = -ComplexMatrix<Real>::Identity(n, n);
  return s;
}

/// Validated quadratic generator. D1 and D2 are symmetric; F is arbitrary.
template <typename Real = double>
class QuadraticGenerator {
 public:
  using Matrix = ComplexMatrix<Real>;

  /// Throws DimensionMismatch on shape errors and AsymmetryError when D1 or
  /// D2 deviates from its transpose by more than `symmetry_tol`.
  static QuadraticGenerator assemble(Matrix d1, Matrix f, Matrix d2,
                                     double symmetry_tol = Tolerances{}.symmetry) {
    const Eigen::Index n = d1.rows();
    if (n < 1) throw InvalidArgument("generator: mode count must be positive");
    if (d1.cols() != n) throw DimensionMismatch("generator D1", d1.rows(), d1.cols(), n, n);
    if (f.rows() != n || f.cols() != n) throw DimensionMismatch("generator F vs D1", f.rows(), f.cols(), n, n);
    if (d2.rows() != n || d2.cols() != n) throw DimensionMismatch("generator D2 vs D1", d2.rows(), d2.cols(), n, n);
    require_finite(d1, "D1");
    require_finite(f, "F");
    require_finite(d2, "D2");
    if (const auto dev = max_asymmetry(d1); dev > symmetry_tol) throw AsymmetryError("D1", static_cast<double>(dev));
    if (const auto dev = max_asymmetry(d2); dev > symmetry_tol) throw AsymmetryError("D2", static_cast<double>(dev));
    return QuadraticGenerator(std::move(d1), std::move(f), std::move(d2));
  }

  static QuadraticGenerator zero(Eigen::Index n) {
    return assemble(Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n));
  }

  Eigen::Index n() const noexcept { return d1_.rows(); }
  const Matrix& D1() const noexcept { return d1_; }
  const Matrix& F() const noexcept { return f_; }
  const Matrix& D2() const noexcept { return d2_; }

  /// R = [[D1, F], [F^T, D2]].
  Matrix R() const {
    const Eigen::Index k = n();
    Matrix r(2 * k, 2 * k);
    r << d1_, f_, f_.transpose(), d2_;
    return r;
  }

  /// R Sigma^{-1} = [[F, -D1], [D2, -F^T]], assembled blockwise (exact).
  Matrix flow_matrix() const {
    const Eigen::Index k = n();
    Matrix k_mat(2 * k, 2 * k);
    k_mat << f_, -d1_, d2_, -f_.transpose();
    return k_mat;
  }

  QuadraticGenerator scaled(Complex<Real> s) const {
    return QuadraticGenerator(s * d1_, s * f_, s * d2_);
  }

 private:
  QuadraticGenerator(Matrix d1, Matrix f, Matrix d2)
      : d1_(std::move(d1)), f_(std::move(f)), d2_(std::move(d2)) {}

  Matrix d1_;
  Matrix f_;
  Matrix d2_;
};

template <typename DerivedD1, typename DerivedF, typename DerivedD2>
auto assemble_generator(const Eigen::MatrixBase<DerivedD1>& d1, const Eigen::MatrixBase<DerivedF>& f,
                        const Eigen::MatrixBase<DerivedD2>& d2, double symmetry_tol = Tolerances{}.symmetry) {
  using Real = typename Eigen::NumTraits<typename DerivedD1::Scalar>::Real;
  using Matrix = ComplexMatrix<Real>;
  return QuadraticGenerator<Real>::assemble(Matrix(d1.template cast<Complex<Real>>()),
                                            Matrix(f.template cast<Complex<Real>>()),
                                            Matrix(d2.template cast<Complex<Real>>()), symmetry_tol);
}

/// T = exp(R Sigma^{-1}) held as four n x n blocks.
template <typename Real = double>
struct TransferMatrix {
  using Matrix = ComplexMatrix<Real>;

  Matrix T11, T12, T21, T22;

  Eigen::Index n() const noexcept { return T11.rows(); }

  Matrix full() const {
    const Eigen::Index k = n();
    Matrix t(2 * k, 2 * k);
    t << T11, T12, T21, T22;
    return t;
  }

  static TransferMatrix from_full(const Matrix& t) {
    if (t.rows() != t.cols() || t.rows() % 2 != 0 || t.rows() == 0)
      throw DimensionMismatch("transfer matrix must be 2n x 2n", t.rows(), t.cols(), t.rows(), t.rows());
    require_finite(t, "transfer matrix");
    const Eigen::Index k = t.rows() / 2;
    return {t.topLeftCorner(k, k), t.topRightCorner(k, k), t.bottomLeftCorner(k, k),
            t.bottomRightCorner(k, k)};
  }

  static TransferMatrix identity(Eigen::Index n) {
    return {Matrix::Identity(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Identity(n, n)};
  }
};

template <typename Real>
TransferMatrix<Real> transfer_matrix(const QuadraticGenerator<Real>& g) {
  return TransferMatrix<Real>::from_full(expm(g.flow_matrix()));
}

/// max |T^T Sigma T - Sigma|.
template <typename Real>
Real symplectic_residual(const TransferMatrix<Real>& t) {
  const ComplexMatrix<Real> full = t.full();
  const ComplexMatrix<Real> s = sigma<Real>(t.n());
  return max_abs(full.transpose() * s * full - s);
}

namespace detail {

inline std::string to_sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Pivot check shared by everything that needs T22^{-1}. The reference scale
// is the whole transfer matrix: in one mode T22 is a scalar and a threshold
// relative to |T22| alone could never fire.
template <typename Real>
Eigen::PartialPivLU<ComplexMatrix<Real>> factor_t22(const TransferMatrix<Real>& t, double rel_pivot_tol) {
  Eigen::PartialPivLU<ComplexMatrix<Real>> lu(t.T22);
  const Real min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  const Real scale = std::max(inf_norm(t.full()), Real(1));
  if (!(min_pivot > rel_pivot_tol * scale)) {
    if (t.n() == 1) throw ZeroT22(static_cast<double>(min_pivot));
    throw SingularMatrix("T22 is singular: the ordered factorization does not exist (|det T22| = " +
                             to_sci(std::abs(static_cast<std::complex<double>>(mat_det(t.T22)))) + ")",
                         static_cast<double>(min_pivot));
  }
  return lu;
}

}  // namespace detail

/// Largest deviation from the block identities implied by T^T Sigma T = Sigma:
///   T11 = T22^{-T} + T12 T22^{-1} T21,
///   T22^T T11 - T12^T T21 = I,  T21^T T11 = T11^T T21,  T22^T T12 = T12^T T22.
template <typename Real>
Real block_relation_residual(const TransferMatrix<Real>& t,
                             double rel_pivot_tol = Tolerances{}.decompose_pivot) {
  using Matrix = ComplexMatrix<Real>;
  const auto lu = detail::factor_t22(t, rel_pivot_tol);
  const Matrix t22_inv = lu.inverse();
  const Matrix id = Matrix::Identity(t.n(), t.n());
  Real r = max_abs(t.T11 - (t22_inv.transpose() + t.T12 * t22_inv * t.T21));
  r = std::max(r, max_abs(t.T22.transpose() * t.T11 - t.T12.transpose() * t.T21 - id));
  r = std::max(r, max_abs(t.T21.transpose() * t.T11 - t.T11.transpose() * t.T21));
  r = std::max(r, max_abs(t.T22.transpose() * t.T12 - t.T12.transpose() * t.T22));
  return r;
}

template <typename Real = double>
struct Factorization {
  using Matrix = ComplexMatrix<Real>;

  Matrix W, Y, Z;
  Complex<Real> prefactor{1};
  // |M - M^T| of W and Z before symmetrization.
  Real W_asymmetry = 0;
  Real Z_asymmetry = 0;

  Eigen::Index n() const noexcept { return W.rows(); }

  static Factorization identity(Eigen::Index n) {
    return {Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n), Complex<Real>(1), 0, 0};
  }
};

struct DecomposeOptions {
  /// T22 pivots below this fraction of ||T||_inf are treated as singular.
  double pivot_tol = Tolerances{}.decompose_pivot;
  /// Optional cap on ||T||_inf ||T22^{-1}||_inf. Round-off in the
  /// reconstructed T grows like eps times its square, so callers that verify
  /// against a tolerance can refuse factorizations that cannot meet it.
  double max_condition = std::numeric_limits<double>::infinity();
};

/// W = T12 T22^{-1}, Z = T22^{-1} T21, Y = -log(T22^T), prefactor = e^{tr(Y)/2}.
template <typename Real>
Factorization<Real> gauss_decompose(const TransferMatrix<Real>& t, const DecomposeOptions& opts = {}) {
  using Matrix = ComplexMatrix<Real>;
  const auto lu = detail::factor_t22(t, opts.pivot_tol);
  const Matrix t22_inv = lu.inverse();
  const Real condition = inf_norm(t.full()) * inf_norm(t22_inv);
  if (condition > opts.max_condition)
    throw SingularMatrix("T22 is too ill-conditioned for the requested tolerance (cond = " +
                             detail::to_sci(static_cast<double>(condition)) + ")",
                         static_cast<double>(lu.matrixLU().diagonal().cwiseAbs().minCoeff()));

  Factorization<Real> f;
  const Matrix w = t.T12 * t22_inv;
  const Matrix z = t22_inv * t.T21;
  f.W_asymmetry = max_asymmetry(w);
  f.Z_asymmetry = max_asymmetry(z);
  f.W = (w + w.transpose()) / Real(2);
  f.Z = (z + z.transpose()) / Real(2);
  f.Y = -logm(t.T22.transpose());
  f.prefactor = std::exp(f.Y.trace() / Real(2));
  return f;
}

/// [[I, W], [0, I]] [[e^Y, 0], [0, e^{-Y^T}]] [[I, 0], [Z, I]].
template <typename Real>
TransferMatrix<Real> reconstruct(const Factorization<Real>& f) {
  using Matrix = ComplexMatrix<Real>;
  const Matrix ey = expm(f.Y);
  const Matrix ey_inv_t = expm(Matrix(-f.Y.transpose()));
  return {ey + f.W * ey_inv_t * f.Z, f.W * ey_inv_t, ey_inv_t * f.Z, ey_inv_t};
}

/// max |reconstruct(f) - T| / max(1, max |T|).
template <typename Real>
Real reconstruction_residual(const TransferMatrix<Real>& t, const Factorization<Real>& f) {
  const ComplexMatrix<Real> full = t.full();
  return max_abs(reconstruct(f).full() - full) / std::max(Real(1), max_abs(full));
}

/// The whole procedure in one call.
template <typename Real>
Factorization<Real> decompose(const QuadraticGenerator<Real>& g, const DecomposeOptions& opts = {}) {
  return gauss_decompose(transfer_matrix(g), opts);
}

}  // namespace eqo

#endif  // EQO_REORDERING_HPP
