#include "briccati/brunovsky.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "briccati/staircase.hpp"

namespace briccati {
namespace {

std::vector<int> BlockStarts(const std::vector<int>& mu) {
  std::vector<int> start(mu.size() + 1, 0);
  for (std::size_t i = 0; i < mu.size(); ++i) start[i + 1] = start[i] + mu[i];
  return start;
}

void RequirePositive(const std::vector<int>& mu) {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] < 1) {
      throw StructureError("input " + std::to_string(i) +
                           " is redundant (controllability index " +
                           std::to_string(mu[i]) + ")");
    }
  }
}

/// |x - target| <= tol, then x = target.
bool Snap(double* x, double target, double tol) {
  if (std::abs(*x - target) > tol) return false;
  *x = target;
  return true;
}

[[noreturn]] void PatternViolation(const char* what, Eigen::Index r,
                                   Eigen::Index c, double value, double tol) {
  std::ostringstream os;
  os << "canonical form pattern violated in " << what << "(" << r << ", " << c
     << ") = " << value << " (tolerance " << tol << ")";
  throw StructureError(os.str());
}

}  // namespace

int BrunovskyTransform::nilpotency_index() const {
  return mu.empty() ? 0 : *std::max_element(mu.begin(), mu.end());
}

BrunovskyPair MakeBrunovskyPair(const std::vector<int>& mu) {
  RequirePositive(mu);
  const auto start = BlockStarts(mu);
  const int n = start.back();
  const int m = static_cast<int>(mu.size());
  BrunovskyPair pair{Matrix::Zero(n, n), Matrix::Zero(n, m)};
  for (int i = 0; i < m; ++i) {
    for (int r = 0; r + 1 < mu[i]; ++r) pair.A(start[i] + r, start[i] + r + 1) = 1.0;
    pair.B(start[i + 1] - 1, i) = 1.0;
  }
  return pair;
}

CanonicalForm ToControllableCanonical(const Matrix& A_co, const Matrix& B_co,
                                      const std::vector<int>& mu) {
  RequirePositive(mu);
  const auto start = BlockStarts(mu);
  const int n = start.back();
  const int m = static_cast<int>(mu.size());
  if (A_co.rows() != n || A_co.cols() != n || B_co.rows() != n ||
      B_co.cols() != m) {
    throw Error("ToControllableCanonical: indices do not match (A_co, B_co)");
  }

  // Selected controllability columns, chain by chain. Columns are
  // normalized; that rescales rows of M^-1 but not their directions, and
  // each chain of T is renormalized below.
  Matrix M(n, n);
  for (int i = 0; i < m; ++i) {
    Vector c = B_co.col(i);
    for (int k = 0; k < mu[i]; ++k) {
      const double norm = c.norm();
      if (norm == 0.0) {
        throw StructureError("zero column in the controllability selection");
      }
      c /= norm;
      M.col(start[i] + k) = c;
      c = A_co * M.col(start[i] + k);
    }
  }
  const Eigen::PartialPivLU<Matrix> lu_m(M);
  const double rcond_m = lu_m.rcond();
  if (!(rcond_m > 1e-15)) {
    std::ostringstream os;
    os << "singular controllability selection matrix (condition estimate "
       << (rcond_m > 0 ? 1.0 / rcond_m : INFINITY)
       << "); indices inconsistent or pair too ill-conditioned";
    throw StructureError(os.str());
  }

  // Rows of M^-1 come from solves with M'.
  const Eigen::PartialPivLU<Matrix> lu_mt(M.transpose());
  CanonicalForm cf;
  cf.T.resize(n, n);
  for (int i = 0; i < m; ++i) {
    const int last = start[i + 1] - 1;
    const Vector e = Vector::Unit(n, last);
    RowVector t = lu_mt.solve(e).transpose();
    for (int k = 0; k < mu[i]; ++k) {
      cf.T.row(start[i] + k) = t;
      t = t * A_co;
    }
    const double s = cf.T.row(last).dot(B_co.col(i));
    if (s == 0.0 || !std::isfinite(s)) {
      throw StructureError("degenerate chain normalization");
    }
    cf.T.middleRows(start[i], mu[i]) /= s;
  }

  const Eigen::PartialPivLU<Matrix> lu_t(cf.T);
  cf.T_inv = lu_t.inverse();
  cf.A = cf.T * A_co * cf.T_inv;
  cf.B = cf.T * B_co;
  cf.condition_estimate = cf.T.norm() * cf.T_inv.norm();

  const double tol = 1e-9 * cf.condition_estimate *
                     std::max({1.0, A_co.norm(), B_co.norm()});
  for (int i = 0; i < m; ++i) {
    for (int r = 0; r < mu[i]; ++r) {
      const int row = start[i] + r;
      const bool last = r + 1 == mu[i];
      if (!last) {
        for (int c = 0; c < n; ++c) {
          const double target = c == row + 1 ? 1.0 : 0.0;
          if (!Snap(&cf.A(row, c), target, tol)) {
            PatternViolation("A_ca", row, c, cf.A(row, c), tol);
          }
        }
        for (int j = 0; j < m; ++j) {
          if (!Snap(&cf.B(row, j), 0.0, tol)) {
            PatternViolation("B_ca", row, j, cf.B(row, j), tol);
          }
        }
      } else {
        for (int j = 0; j <= i; ++j) {
          const double target = j == i ? 1.0 : 0.0;
          if (!Snap(&cf.B(row, j), target, tol)) {
            PatternViolation("B_ca", row, j, cf.B(row, j), tol);
          }
        }
      }
    }
  }
  return cf;
}

FeedbackPair CanonicalToBrunovsky(const Matrix& A_ca, const Matrix& B_ca,
                                  const std::vector<int>& mu) {
  RequirePositive(mu);
  const auto start = BlockStarts(mu);
  const int n = start.back();
  const int m = static_cast<int>(mu.size());
  if (A_ca.rows() != n || A_ca.cols() != n || B_ca.rows() != n ||
      B_ca.cols() != m) {
    throw Error("CanonicalToBrunovsky: indices do not match (A_ca, B_ca)");
  }
  Matrix V(m, m), W(m, n);
  for (int i = 0; i < m; ++i) {
    V.row(i) = B_ca.row(start[i + 1] - 1);
    W.row(i) = A_ca.row(start[i + 1] - 1);
  }
  const double tol = 1e-9 * std::max(1.0, B_ca.norm());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      if (!Snap(&V(i, j), target, tol)) {
        PatternViolation("V", i, j, V(i, j), tol);
      }
    }
  }
  FeedbackPair fp;
  const auto Vu = V.triangularView<Eigen::UnitUpper>();
  fp.G = Vu.solve(Matrix::Identity(m, m));
  fp.F = Vu.solve(-W);
  fp.G_inv = V;
  return fp;
}

BrunovskyTransform ComputeBrunovskyTransform(const Matrix& A_co,
                                             const Matrix& B_co,
                                             double rank_tol) {
  BrunovskyTransform bt;
  bt.mu = ControllabilityIndices(A_co, B_co, rank_tol);
  RequirePositive(bt.mu);
  CanonicalForm cf = ToControllableCanonical(A_co, B_co, bt.mu);
  FeedbackPair fp = CanonicalToBrunovsky(cf.A, cf.B, bt.mu);
  bt.F = fp.F * cf.T;
  bt.G = std::move(fp.G);
  bt.G_inv = std::move(fp.G_inv);
  bt.T = std::move(cf.T);
  bt.T_inv = std::move(cf.T_inv);
  return bt;
}

FeedbackResiduals ComputeResiduals(const Matrix& A_co, const Matrix& B_co,
                                   const BrunovskyTransform& bt) {
  const BrunovskyPair pair = MakeBrunovskyPair(bt.mu);
  const Matrix closed = A_co + B_co * bt.F;
  FeedbackResiduals res;
  res.A_residual = (bt.T * closed * bt.T_inv - pair.A).norm();
  res.B_residual = (bt.T * B_co * bt.G - pair.B).norm();
  Matrix power = Matrix::Identity(closed.rows(), closed.cols());
  for (int k = 0; k < bt.nilpotency_index(); ++k) power = power * closed;
  res.nilpotency = power.norm();
  res.T_inverse =
      (bt.T * bt.T_inv - Matrix::Identity(bt.nx(), bt.nx())).norm();
  res.G_inverse =
      (bt.G * bt.G_inv - Matrix::Identity(bt.nu(), bt.nu())).norm();
  return res;
}

void StructuredQuadraticsInto(const Matrix& P, const std::vector<int>& mu,
                              StructuredQuadratics* out) {
  RequirePositive(mu);
  const auto start = BlockStarts(mu);
  const int n = start.back();
  const int m = static_cast<int>(mu.size());
  if (P.rows() != n || P.cols() != n) {
    throw Error("StructuredQuadratics: P does not match the indices");
  }
  out->AtPA.resize(n, n);
  out->BtPA.resize(m, n);
  out->BtPB.resize(m, m);

  // [A_i' P_ij A_j](r, c) = P_ij(r - 1, c - 1), zero on the first row/col.
  for (int j = 0; j < m; ++j) {
    const int sj = start[j];
    const int wj = mu[j] - 1;
    out->AtPA.col(sj).setZero();
    for (int i = 0; i < m; ++i) {
      const int si = start[i];
      const int wi = mu[i] - 1;
      out->AtPA(si, sj) = 0.0;
      if (wj > 0) out->AtPA.block(si, sj + 1, 1, wj).setZero();
      if (wi > 0 && wj > 0) {
        out->AtPA.block(si + 1, sj + 1, wi, wj) = P.block(si, sj, wi, wj);
      }
    }
  }
  // [B_i' P_ij A_j](0, c) = P_ij(mu_i - 1, c - 1);  B_i' P_ij B_j = corner.
  for (int i = 0; i < m; ++i) {
    const int li = start[i + 1] - 1;
    for (int j = 0; j < m; ++j) {
      const int sj = start[j];
      const int wj = mu[j] - 1;
      out->BtPA(i, sj) = 0.0;
      if (wj > 0) out->BtPA.block(i, sj + 1, 1, wj) = P.block(li, sj, 1, wj);
      out->BtPB(i, j) = P(li, start[j + 1] - 1);
    }
  }
}

StructuredQuadratics ComputeStructuredQuadratics(const Matrix& P,
                                                 const std::vector<int>& mu) {
  StructuredQuadratics out;
  StructuredQuadraticsInto(P, mu, &out);
  return out;
}

BrunovskyQuadratics::BrunovskyQuadratics(std::vector<int> mu)
    : mu_(std::move(mu)) {
  RequirePositive(mu_);
  start_ = BlockStarts(mu_);
  nx_ = start_.back();
}

void BrunovskyQuadratics::Quadratics(const Matrix& P,
                                     StructuredQuadratics* out) const {
  CountCall();
  StructuredQuadraticsInto(P, mu_, out);
}

void BrunovskyQuadratics::ApplyAt(const Vector& v, Vector* out) const {
  out->resize(nx_);
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    const int s = start_[i];
    (*out)(s) = 0.0;
    if (mu_[i] > 1) out->segment(s + 1, mu_[i] - 1) = v.segment(s, mu_[i] - 1);
  }
}

void BrunovskyQuadratics::ApplyBt(const Vector& v, Vector* out) const {
  out->resize(static_cast<Eigen::Index>(mu_.size()));
  for (std::size_t i = 0; i < mu_.size(); ++i) (*out)(i) = v(start_[i + 1] - 1);
}

void BrunovskyQuadratics::Propagate(const Vector& x, const Vector& u,
                                    Vector* out) const {
  out->resize(nx_);
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    const int s = start_[i];
    if (mu_[i] > 1) out->segment(s, mu_[i] - 1) = x.segment(s + 1, mu_[i] - 1);
    (*out)(start_[i + 1] - 1) = u(i);
  }
}

}  // namespace briccati
