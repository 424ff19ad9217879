#ifndef EQO_TYPES_HPP
#define EQO_TYPES_HPP

#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace eqo {

template <typename Real = double>
using Complex = std::complex<Real>;

/// Dense complex matrix; the carrier for every block the library touches.
template <typename Real = double>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Row vector, matching the (x_1, ..., x_n) row convention of the operators.
template <typename Real = double>
using ComplexRowVector = Eigen::Matrix<Complex<Real>, 1, Eigen::Dynamic>;

using cd = Complex<double>;
using MatrixXcd = ComplexMatrix<double>;
using RowVectorXcd = ComplexRowVector<double>;

// Error hierarchy. InputError means the caller handed us something malformed;
// DomainError means the input is well formed but the requested quantity does
// not exist (singular block, branch cut, divergent flow).

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InputError {
 public:
  DimensionMismatch(const std::string& what, Eigen::Index ar, Eigen::Index ac, Eigen::Index br,
                    Eigen::Index bc)
      : InputError(format(what, ar, ac, br, bc)) {}

 private:
  static std::string format(const std::string& what, Eigen::Index ar, Eigen::Index ac,
                            Eigen::Index br, Eigen::Index bc) {
    std::ostringstream os;
    os << what << ": shapes " << ar << "x" << ac << " and " << br << "x" << bc
       << " are incompatible";
    return os.str();
  }
};

class AsymmetryError : public InputError {
 public:
  AsymmetryError(const std::string& which, double max_deviation)
      : InputError(which + " is not symmetric (max |M - M^T| = " + std::to_string(max_deviation) +
                   ")"),
        max_deviation_(max_deviation) {}
  double max_deviation() const noexcept { return max_deviation_; }

 private:
  double max_deviation_;
};

class InvalidArgument : public InputError {
 public:
  using InputError::InputError;
};

class SingularMatrix : public DomainError {
 public:
  SingularMatrix(const std::string& what, double pivot)
      : DomainError(what + " (smallest pivot magnitude " + to_sci(pivot) + ")"), pivot_(pivot) {}
  /// Magnitude of the offending pivot (or |det| for scalar blocks).
  double pivot() const noexcept { return pivot_; }

 protected:
  static std::string to_sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
  }

 private:
  double pivot_;
};

/// n = 1 specialization raised by the scalar closed form.
class ZeroT22 : public SingularMatrix {
 public:
  explicit ZeroT22(double magnitude)
      : SingularMatrix("T22 vanishes (|det T22| = " + to_sci(magnitude) + "); the ordered factorization does not exist", magnitude) {}
};

class BranchCut : public DomainError {
 public:
  BranchCut(const std::string& what, std::complex<double> eigenvalue)
      : DomainError(what + ": eigenvalue (" + std::to_string(eigenvalue.real()) + ", " +
                    std::to_string(eigenvalue.imag()) +
                    ") lies on the closed negative real axis"),
        eigenvalue_(eigenvalue) {}
  std::complex<double> eigenvalue() const noexcept { return eigenvalue_; }

 private:
  std::complex<double> eigenvalue_;
};

class Singularity : public DomainError {
 public:
  using DomainError::DomainError;
};

class FlowSingular : public DomainError {
 public:
  FlowSingular(const std::string& what, double time)
      : DomainError(what + " at t = " + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Residual tolerances. Callers that want a different default (the CLI reads
/// EQO_DEFAULT_TOL) build their own instance; nothing here is global.
struct Tolerances {
  double residual = 1e-10;
  double symmetry = 1e-13;
  double inverse_pivot = 1e-13;
  double decompose_pivot = 1e-10;
};

}  // namespace eqo

#endif  // EQO_TYPES_HPP
