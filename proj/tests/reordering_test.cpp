#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eqo/closed_form_1d.hpp"
#include "eqo/reordering.hpp"
#include "test_util.hpp"

namespace {

using eqo::cd;
using eqo::MatrixXcd;
using eqo::QuadraticGenerator;
using eqo::test::random_matrix;
using eqo::test::random_symmetric;

constexpr double kPi = std::numbers::pi;

MatrixXcd scalar(cd v) { return MatrixXcd::Constant(1, 1, v); }

QuadraticGenerator<double> random_generator(std::mt19937_64& rng, int n) {
  return eqo::assemble_generator(random_symmetric(rng, n, 1.0), random_matrix(rng, n, 1.0),
                                 random_symmetric(rng, n, 1.0));
}

TEST(Sigma, Shapes) {
  EXPECT_EQ(eqo::sigma<double>(1), eqo::test::matrix(2, {{0, 0}, {1, 0}, {-1, 0}, {0, 0}}));
  const MatrixXcd s3 = eqo::sigma<double>(3);
  EXPECT_EQ(MatrixXcd(s3 * s3), MatrixXcd(-MatrixXcd::Identity(6, 6)));
  const MatrixXcd s2 = eqo::sigma<double>(2);
  EXPECT_EQ(eqo::mat_inv(s2), MatrixXcd(-s2));
}

TEST(Assemble, ZeroAndOneMode) {
  const auto z = QuadraticGenerator<double>::zero(2);
  EXPECT_EQ(eqo::max_abs(z.R()), 0.0);
  const cd a(0.4, 0.1), b(-0.2, 0), c(0.1, -0.3);
  const auto g = eqo::assemble_generator(scalar(a), scalar(c), scalar(b));
  const MatrixXcd r = g.R();
  EXPECT_EQ(r(0, 0), a);
  EXPECT_EQ(r(0, 1), c);
  EXPECT_EQ(r(1, 0), c);
  EXPECT_EQ(r(1, 1), b);
  // R Sigma^{-1} built blockwise equals the matrix product.
  EXPECT_LT(eqo::max_abs(g.flow_matrix() - r * eqo::mat_inv(eqo::sigma<double>(1))), 1e-16);
}

TEST(Assemble, RejectsAsymmetry) {
  const MatrixXcd d1 = eqo::test::matrix(2, {{1, 0}, {0, 0}, {0.1, 0}, {1, 0}});
  try {
    eqo::assemble_generator(d1, MatrixXcd::Zero(2, 2), MatrixXcd::Zero(2, 2));
    FAIL() << "expected AsymmetryError";
  } catch (const eqo::AsymmetryError& e) {
    EXPECT_NEAR(e.max_deviation(), 0.1, 1e-15);
    EXPECT_NE(std::string(e.what()).find("D1"), std::string::npos);
  }
  EXPECT_THROW(eqo::assemble_generator(MatrixXcd::Zero(2, 2), MatrixXcd::Zero(2, 2), d1), eqo::AsymmetryError);
}

TEST(Assemble, RejectsShapeAndNonFinite) {
  EXPECT_THROW(eqo::assemble_generator(MatrixXcd::Zero(2, 2), MatrixXcd::Zero(3, 3), MatrixXcd::Zero(2, 2)),
               eqo::DimensionMismatch);
  EXPECT_THROW(eqo::assemble_generator(MatrixXcd::Zero(2, 3), MatrixXcd::Zero(2, 2), MatrixXcd::Zero(2, 2)),
               eqo::DimensionMismatch);
  EXPECT_THROW(eqo::assemble_generator(MatrixXcd::Zero(0, 0), MatrixXcd::Zero(0, 0), MatrixXcd::Zero(0, 0)),
               eqo::InputError);
  EXPECT_THROW(eqo::assemble_generator(scalar(cd(NAN, 0)), scalar(0), scalar(0)), eqo::InputError);
}

TEST(TransferMatrix, ZeroGeneratorIsIdentity) {
  const auto t = eqo::transfer_matrix(QuadraticGenerator<double>::zero(3));
  EXPECT_LT(eqo::max_abs(t.full() - MatrixXcd::Identity(6, 6)), 1e-16);
}

TEST(TransferMatrix, HarmonicOneMode) {
  const double t = 0.3;
  const cd it(0, t);
  const auto g = eqo::assemble_generator(scalar(-it), scalar(0), scalar(it));
  const auto tm = eqo::transfer_matrix(g);
  const cd i(0, 1);
  EXPECT_LT(std::abs(tm.T11(0, 0) - std::cos(t)), 1e-15);
  EXPECT_LT(std::abs(tm.T12(0, 0) - i * std::sin(t)), 1e-15);
  EXPECT_LT(std::abs(tm.T21(0, 0) - i * std::sin(t)), 1e-15);
  EXPECT_LT(std::abs(tm.T22(0, 0) - std::cos(t)), 1e-15);
}

TEST(TransferMatrix, MatchesOneModeClosedForm) {
  const auto k = eqo::Coefficients1D<double>::make(0.2, 0.3, 0.5);
  EXPECT_LT(eqo::max_abs(eqo::transfer_matrix(k.generator()).full() - eqo::transfer_1d(k)), 1e-14);
}

TEST(TransferMatrix, FullRoundTripAndShapeCheck) {
  std::mt19937_64 rng(3);
  const auto t = eqo::transfer_matrix(random_generator(rng, 2));
  EXPECT_EQ(eqo::TransferMatrix<double>::from_full(t.full()).full(), t.full());
  EXPECT_THROW(eqo::TransferMatrix<double>::from_full(MatrixXcd::Zero(3, 3)), eqo::DimensionMismatch);
}

TEST(Residuals, RandomGeneratorsAreSymplectic) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 60; ++k) {
    const int n = 1 + k % 3;
    const auto t = eqo::transfer_matrix(random_generator(rng, n));
    EXPECT_LT(eqo::symplectic_residual(t), 1e-10);
    if (std::abs(eqo::mat_det(t.T22)) > 0.02) {
      EXPECT_LT(eqo::block_relation_residual(t), 1e-10);
    }
  }
}

TEST(Residuals, IdentityAndPerturbation) {
  const auto id = eqo::TransferMatrix<double>::identity(2);
  EXPECT_EQ(eqo::symplectic_residual(id), 0.0);
  EXPECT_EQ(eqo::block_relation_residual(id), 0.0);
  std::mt19937_64 rng(43);
  auto t = eqo::transfer_matrix(random_generator(rng, 2));
  t.T11(0, 0) += 1e-3;
  EXPECT_GE(eqo::symplectic_residual(t), 5e-4);
  EXPECT_GE(eqo::block_relation_residual(t), 5e-4);
}

TEST(Residuals, BlockRelationNeedsInvertibleT22) {
  const auto t = eqo::transfer_matrix(eqo::Coefficients1D<double>::make(cd(0, -kPi / 2), cd(0, kPi / 2), 0).generator());
  EXPECT_THROW(eqo::block_relation_residual(t), eqo::SingularMatrix);
}

TEST(GaussDecompose, Identity) {
  const auto f = eqo::gauss_decompose(eqo::TransferMatrix<double>::identity(3));
  EXPECT_EQ(eqo::max_abs(f.W), 0.0);
  EXPECT_EQ(eqo::max_abs(f.Y), 0.0);
  EXPECT_EQ(eqo::max_abs(f.Z), 0.0);
  EXPECT_EQ(f.prefactor, cd(1));
}

TEST(GaussDecompose, HarmonicQuarterPeriod) {
  const cd it(0, kPi / 4);
  const auto f = eqo::decompose(eqo::assemble_generator(scalar(-it), scalar(0), scalar(it)));
  EXPECT_LT(std::abs(f.W(0, 0) - cd(0, 1)), 1e-14);
  EXPECT_LT(std::abs(f.Z(0, 0) - cd(0, 1)), 1e-14);
  EXPECT_LT(std::abs(f.Y(0, 0) - std::log(2.0) / 2), 1e-14);
  EXPECT_LT(std::abs(f.prefactor - std::pow(2.0, 0.25)), 1e-14);
}

TEST(GaussDecompose, PureDilation) {
  const double r = 0.6;
  const auto f = eqo::decompose(eqo::assemble_generator(scalar(0), scalar(-r), scalar(0)));
  EXPECT_LT(std::abs(f.W(0, 0)), 1e-15);
  EXPECT_LT(std::abs(f.Z(0, 0)), 1e-15);
  EXPECT_LT(std::abs(f.Y(0, 0) + r), 1e-15);
  EXPECT_LT(std::abs(f.prefactor - std::exp(-r / 2)), 1e-15);
}

TEST(GaussDecompose, SingularT22ReportsDeterminant) {
  const cd it(0, kPi / 2);
  const auto g = eqo::assemble_generator(scalar(-it), scalar(0), scalar(it));
  try {
    eqo::decompose(g);
    FAIL() << "expected SingularMatrix";
  } catch (const eqo::SingularMatrix& e) {
    EXPECT_NE(std::string(e.what()).find("det T22"), std::string::npos);
    EXPECT_LT(e.pivot(), 1e-10);
  }
}

TEST(GaussDecompose, ConditionCap) {
  const cd it(0, 1.5707963);
  const auto g = eqo::assemble_generator(scalar(-it), scalar(0), scalar(it));
  EXPECT_NO_THROW(eqo::decompose(g));
  eqo::DecomposeOptions opts;
  opts.max_condition = 1e4;
  EXPECT_THROW(eqo::decompose(g, opts), eqo::SingularMatrix);
}

TEST(GaussDecompose, WAndZAreSymmetric) {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 40; ++k) {
    const auto t = eqo::transfer_matrix(random_generator(rng, 3));
    if (std::abs(eqo::mat_det(t.T22)) < 0.02) continue;
    const auto f = eqo::gauss_decompose(t);
    EXPECT_LT(f.W_asymmetry, 1e-10);
    EXPECT_LT(f.Z_asymmetry, 1e-10);
    EXPECT_EQ(eqo::max_asymmetry(f.W), 0.0);
    EXPECT_LT(std::abs(f.prefactor - std::exp(f.Y.trace() / 2.0)), 1e-15 * std::abs(f.prefactor));
  }
}

TEST(Reconstruct, IdentityAndRoundTrip) {
  EXPECT_EQ(eqo::reconstruct(eqo::Factorization<double>::identity(2)).full(), MatrixXcd(MatrixXcd::Identity(4, 4)));
  std::mt19937_64 rng(53);
  int used = 0;
  for (int k = 0; k < 60; ++k) {
    const auto t = eqo::transfer_matrix(random_generator(rng, 3));
    if (std::abs(eqo::mat_det(t.T22)) < 0.02) continue;
    EXPECT_LT(eqo::reconstruction_residual(t, eqo::gauss_decompose(t)), 1e-10);
    ++used;
  }
  EXPECT_GT(used, 40);
}

TEST(Reconstruct, OneModeClosedFormFactorsRebuildTransfer) {
  const auto k = eqo::Coefficients1D<double>::make(0.4, -0.2, 0.1);
  const auto rebuilt = eqo::reconstruct(eqo::decompose_1d(k)).full();
  EXPECT_LT(eqo::max_abs(rebuilt - eqo::transfer_1d(k)), 1e-14);
}

TEST(Decompose, ScalingByZeroGivesIdentity) {
  std::mt19937_64 rng(59);
  const auto g = random_generator(rng, 2).scaled(0.0);
  const auto f = eqo::decompose(g);
  EXPECT_EQ(eqo::max_abs(f.W) + eqo::max_abs(f.Y) + eqo::max_abs(f.Z), 0.0);
}

}  // namespace
