#include "briccati/staircase.hpp"

#include <algorithm>

#include <Eigen/SVD>

namespace briccati {

KalmanDecomposition StaircaseDecompose(const Matrix& A, const Matrix& B,
                                       double rank_tol) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n) {
    throw Error("StaircaseDecompose: A must be square and B must match it");
  }
  Matrix At = A;
  Matrix Bt = B;
  Matrix T = Matrix::Identity(n, n);
  const double threshold = rank_tol * std::max(A.norm(), B.norm());

  KalmanDecomposition kd;
  Eigen::Index row = 0;       // first row not yet in the staircase
  Eigen::Index col = 0;       // column block feeding the next step
  Eigen::Index width = m;
  bool first = true;
  while (row < n && width > 0) {
    const Eigen::Index rem = n - row;
    auto block = [&]() -> Eigen::Block<Matrix> {
      return first ? Bt.block(row, 0, rem, width)
                   : At.block(row, col, rem, width);
    };
    Eigen::JacobiSVD<Matrix> svd(block(), Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Eigen::Index rho = 0;
    while (rho < sv.size() && sv(rho) > threshold) ++rho;
    if (rho == 0) {
      block().setZero();
      break;
    }
    if (rho < rem) {
      const Eigen::HouseholderQR<Matrix> qr(svd.matrixU().leftCols(rho));
      const auto H = qr.householderQ();
      At.bottomRows(rem).applyOnTheLeft(H.adjoint());
      At.rightCols(rem).applyOnTheRight(H);
      Bt.bottomRows(rem).applyOnTheLeft(H.adjoint());
      T.bottomRows(rem).applyOnTheLeft(H.adjoint());
      // What is left below the leading rho rows is below the threshold.
      block().bottomRows(rem - rho).setZero();
    }
    kd.step_ranks.push_back(static_cast<int>(rho));
    col = row;
    width = rho;
    row += rho;
    first = false;
  }

  const Eigen::Index nc = row;
  const Eigen::Index nuc = n - nc;
  kd.n_controllable = static_cast<int>(nc);
  kd.T = std::move(T);
  kd.A_co = At.topLeftCorner(nc, nc);
  kd.A_12 = At.topRightCorner(nc, nuc);
  kd.A_uc = At.bottomRightCorner(nuc, nuc);
  kd.B_co = Bt.topRows(nc);
  return kd;
}

bool IsControllable(const Matrix& A, const Matrix& B, double rank_tol) {
  return StaircaseDecompose(A, B, rank_tol).n_controllable == A.rows();
}

std::vector<int> ControllabilityIndices(const Matrix& A_co, const Matrix& B_co,
                                        double rank_tol) {
  const Eigen::Index n = A_co.rows();
  const Eigen::Index m = B_co.cols();
  if (A_co.cols() != n || B_co.rows() != n) {
    throw Error("ControllabilityIndices: dimension mismatch");
  }
  std::vector<int> mu(m, 0);
  if (n == 0) return mu;

  // Orthonormal basis of the accepted columns. A^k b_i is represented by A
  // applied to the normalized residual of A^{k-1} b_i; modulo the span of
  // the columns already visited this is the same vector, so the accept /
  // reject decisions match the raw controllability matrix while avoiding
  // its exponential scaling.
  Matrix basis(n, n);
  Eigen::Index count = 0;
  std::vector<Vector> direction(m);
  std::vector<bool> alive(m, true);
  Vector c(n), r(n);
  for (Eigen::Index degree = 0; count < n; ++degree) {
    bool any = false;
    for (Eigen::Index i = 0; i < m && count < n; ++i) {
      if (!alive[i]) continue;
      if (degree == 0) {
        c = B_co.col(i);
      } else {
        c.noalias() = A_co * direction[i];
      }
      const double norm = c.norm();
      if (norm == 0.0) {
        alive[i] = false;
        continue;
      }
      c /= norm;
      const auto Q = basis.leftCols(count);
      r = c - Q * (Q.transpose() * c);
      r -= Q * (Q.transpose() * r);
      const double rn = r.norm();
      if (rn > rank_tol) {
        direction[i] = r / rn;
        basis.col(count++) = direction[i];
        ++mu[i];
        any = true;
      } else {
        alive[i] = false;
      }
    }
    if (!any) break;
  }
  if (count != n) {
    throw StructureError(
        "controllability indices sum to " + std::to_string(count) +
        " but the pair has dimension " + std::to_string(n) +
        " (uncontrollable pair or rank_tol too large)");
  }
  return mu;
}

}  // namespace briccati
