#include "briccati/staircase.hpp"

#include <algorithm>
#include <complex>

#include <gtest/gtest.h>

#include "briccati/brunovsky.hpp"
#include "test_util.hpp"

namespace briccati {
namespace {

using testing::RandomMatrix;

Matrix Reassemble(const KalmanDecomposition& kd) {
  const int n = static_cast<int>(kd.T.rows());
  const int nc = kd.n_controllable;
  Matrix M = Matrix::Zero(n, n);
  M.topLeftCorner(nc, nc) = kd.A_co;
  M.topRightCorner(nc, n - nc) = kd.A_12;
  M.bottomRightCorner(n - nc, n - nc) = kd.A_uc;
  return M;
}

// Largest distance in a greedy one-to-one matching of two eigenvalue sets.
double SpectrumDistance(const Matrix& a, const Matrix& b1, const Matrix& b2) {
  std::vector<std::complex<double>> x, y;
  if (a.rows() > 0) {
    const Eigen::EigenSolver<Matrix> ea(a, false);
    for (int i = 0; i < a.rows(); ++i) x.push_back(ea.eigenvalues()(i));
  }
  for (const Matrix* m : {&b1, &b2}) {
    if (m->rows() == 0) continue;
    const Eigen::EigenSolver<Matrix> e(*m, false);
    for (int i = 0; i < m->rows(); ++i) y.push_back(e.eigenvalues()(i));
  }
  if (x.size() != y.size()) return INFINITY;
  double worst = 0.0;
  for (const auto& v : x) {
    auto best = std::min_element(y.begin(), y.end(), [&](auto p, auto q) {
      return std::abs(p - v) < std::abs(q - v);
    });
    worst = std::max(worst, std::abs(*best - v));
    y.erase(best);
  }
  return worst;
}

void ExpectInvariants(const Matrix& A, const Matrix& B,
                      const KalmanDecomposition& kd) {
  const int n = static_cast<int>(A.rows());
  const int nc = kd.n_controllable;
  EXPECT_LE((kd.T * kd.T.transpose() - Matrix::Identity(n, n)).norm(),
            1e-12 * n);
  EXPECT_LE((kd.T * A * kd.T.transpose() - Reassemble(kd)).norm(),
            1e-10 * std::max(A.norm(), 1e-300));
  Matrix Bt = Matrix::Zero(n, B.cols());
  Bt.topRows(nc) = kd.B_co;
  EXPECT_LE((kd.T * B - Bt).norm(), 1e-10 * B.norm());
  int sum = 0;
  for (int r : kd.step_ranks) sum += r;
  EXPECT_EQ(sum, nc);
  if (nc > 0) {
    EXPECT_TRUE(IsControllable(kd.A_co, kd.B_co));
  }
}

GTEST_TEST(Staircase, AlreadyDecomposed) {
  Matrix A(2, 2);
  A << 0, 0, 0, 2;
  Matrix B(2, 1);
  B << 1, 0;
  const auto kd = StaircaseDecompose(A, B);
  EXPECT_EQ(kd.n_controllable, 1);
  EXPECT_EQ(kd.T, Matrix::Identity(2, 2));
  EXPECT_EQ(kd.A_co(0, 0), 0.0);
  EXPECT_EQ(kd.B_co(0, 0), 1.0);
  EXPECT_EQ(kd.A_uc(0, 0), 2.0);
}

GTEST_TEST(Staircase, ControllablePair) {
  std::mt19937_64 rng(4);
  const Matrix A = RandomMatrix(rng, 6, 6);
  const Matrix B = RandomMatrix(rng, 6, 2);
  // Full rank controllability matrix, by singular values.
  Matrix ctrb(6, 12);
  Matrix AkB = B;
  for (int k = 0; k < 6; ++k) {
    ctrb.middleCols(2 * k, 2) = AkB;
    AkB = A * AkB;
  }
  const Eigen::JacobiSVD<Matrix> svd(ctrb);
  ASSERT_GT(svd.singularValues()(5), 1e-9 * svd.singularValues()(0));

  const auto kd = StaircaseDecompose(A, B);
  EXPECT_EQ(kd.n_controllable, 6);
  EXPECT_EQ(kd.A_uc.size(), 0);
  EXPECT_LT((kd.A_co - kd.T * A * kd.T.transpose()).norm(), 1e-12 * A.norm());
  ExpectInvariants(A, B, kd);
}

GTEST_TEST(Staircase, StaircaseShape) {
  std::mt19937_64 rng(5);
  const Matrix A = RandomMatrix(rng, 7, 7);
  const Matrix B = RandomMatrix(rng, 7, 2);
  const auto kd = StaircaseDecompose(A, B);
  ASSERT_EQ(kd.n_controllable, 7);
  EXPECT_EQ(kd.step_ranks, (std::vector<int>{2, 2, 2, 1}));
  // B_co is zero below its first block; A_co is zero below each
  // sub-diagonal block.
  EXPECT_TRUE(kd.B_co.bottomRows(5).isZero(0));
  int row = 0, prev = 0;
  for (std::size_t s = 0; s < kd.step_ranks.size(); ++s) {
    const int r = kd.step_ranks[s];
    if (s > 0) {
      EXPECT_TRUE(kd.A_co.block(row + r, prev, 7 - row - r, row - prev)
                      .isZero(0));
    }
    prev = row;
    row += r;
  }
}

GTEST_TEST(Staircase, ZeroInput) {
  std::mt19937_64 rng(6);
  const Matrix A = RandomMatrix(rng, 5, 5);
  const auto kd = StaircaseDecompose(A, Matrix::Zero(5, 2));
  EXPECT_EQ(kd.n_controllable, 0);
  EXPECT_EQ(kd.n_uncontrollable(), 5);
  EXPECT_LT(SpectrumDistance(A, kd.A_uc, Matrix(0, 0)), 1e-8);
}

GTEST_TEST(Staircase, HiddenUncontrollableBlock) {
  std::mt19937_64 rng(7);
  const int n = 8, nc = 5, m = 2;
  Matrix A = RandomMatrix(rng, n, n);
  A.bottomLeftCorner(n - nc, nc).setZero();
  Matrix B = Matrix::Zero(n, m);
  B.topRows(nc) = RandomMatrix(rng, nc, m);
  const Matrix U = testing::RandomOrthogonal(rng, n);
  const Matrix Ah = U * A * U.transpose();
  const Matrix Bh = U * B;
  const auto kd = StaircaseDecompose(Ah, Bh);
  EXPECT_EQ(kd.n_controllable, nc);
  ExpectInvariants(Ah, Bh, kd);
  EXPECT_LT(SpectrumDistance(Ah, kd.A_co, kd.A_uc), 1e-8);
}

GTEST_TEST(Staircase, RandomProperties) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::UniformInt(rng, 1, 12);
    const int m = testing::UniformInt(rng, 1, 4);
    Matrix A = RandomMatrix(rng, n, n) / std::sqrt(double(n));
    Matrix B = RandomMatrix(rng, n, m);
    if (trial % 3 == 1 && m > 1) B.col(m - 1) = B.col(0);  // rank deficient
    if (trial % 3 == 2) {
      const int nc = testing::UniformInt(rng, 0, n);
      A.bottomLeftCorner(n - nc, nc).setZero();
      B.bottomRows(n - nc).setZero();
      const Matrix U = testing::RandomOrthogonal(rng, n);
      A = U * A * U.transpose();
      B = U * B;
    }
    const auto kd = StaircaseDecompose(A, B);
    ExpectInvariants(A, B, kd);
    EXPECT_LT(SpectrumDistance(A, kd.A_co, kd.A_uc), 1e-8) << "trial " << trial;
  }
}

GTEST_TEST(ControllabilityIndices, BrunovskyPair) {
  const auto pair = MakeBrunovskyPair({2, 1});
  EXPECT_EQ(ControllabilityIndices(pair.A, pair.B), (std::vector<int>{2, 1}));
}

GTEST_TEST(ControllabilityIndices, SingleInputPair) {
  Matrix A(2, 2);
  A << 0, -1, 1, -1;
  Matrix B(2, 1);
  B << 1, 0;
  EXPECT_EQ(ControllabilityIndices(A, B), (std::vector<int>{2}));
}

GTEST_TEST(ControllabilityIndices, IntegratorChain) {
  const int n = 9;
  Matrix A = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
  Matrix B = Matrix::Zero(n, 1);
  B(n - 1, 0) = 1.0;
  EXPECT_EQ(ControllabilityIndices(A, B), (std::vector<int>{n}));
}

GTEST_TEST(ControllabilityIndices, RedundantInput) {
  std::mt19937_64 rng(9);
  const Matrix A = RandomMatrix(rng, 4, 4);
  Matrix B(4, 2);
  B.col(0) = RandomMatrix(rng, 4, 1);
  B.col(1) = 2.0 * B.col(0);
  EXPECT_EQ(ControllabilityIndices(A, B), (std::vector<int>{4, 0}));
}

GTEST_TEST(ControllabilityIndices, GenericMultiInput) {
  std::mt19937_64 rng(10);
  const Matrix A = RandomMatrix(rng, 7, 7);
  const Matrix B = RandomMatrix(rng, 7, 3);
  EXPECT_EQ(ControllabilityIndices(A, B), (std::vector<int>{3, 2, 2}));
}

GTEST_TEST(ControllabilityIndices, UncontrollableThrows) {
  Matrix A = Matrix::Identity(3, 3);
  Matrix B(3, 1);
  B << 1, 0, 0;
  EXPECT_THROW(ControllabilityIndices(A, B), StructureError);
}

}  // namespace
}  // namespace briccati
