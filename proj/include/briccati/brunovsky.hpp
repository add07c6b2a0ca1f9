#pragma once

#include <vector>

#include "briccati/common.hpp"
#include "briccati/riccati.hpp"

namespace briccati {

/// Feedback equivalence of a controllable pair with its Brunovsky form:
///
///   A_b = T (A_co + B_co F) T^-1,   B_b = T B_co G.
struct BrunovskyTransform {
  std::vector<int> mu;  // controllability indices, all >= 1
  Matrix T;             // T_jo
  Matrix T_inv;
  Matrix F;  // F_db, deadbeat gain
  Matrix G;
  Matrix G_inv;

  int nx() const { return static_cast<int>(T.rows()); }
  int nu() const { return static_cast<int>(G.rows()); }
  /// Nilpotency index of A_co + B_co F, max_i mu_i.
  int nilpotency_index() const;
};

struct BrunovskyPair {
  Matrix A;
  Matrix B;
};

/// Block-diagonal chains of integrators with block sizes `mu`.
/// Throws StructureError on a zero index.
BrunovskyPair MakeBrunovskyPair(const std::vector<int>& mu);

struct CanonicalForm {
  Matrix T;  // T_ca
  Matrix T_inv;
  Matrix A;  // A_ca = T A_co T^-1
  Matrix B;  // B_ca = T B_co
  /// ||T||_F * ||T^-1||_F.
  double condition_estimate = 0.0;
};

/// Multi-input controllable canonical form. The rows of T are q_i A^k
/// (k < mu_i), with q_i the row of M^-1 matching the last column of chain i
/// in M = [b_1 .. A^{mu_1-1} b_1 | ... ]. Entries fixed to 0/1 by the form
/// are checked and then snapped exactly.
CanonicalForm ToControllableCanonical(const Matrix& A_co, const Matrix& B_co,
                                      const std::vector<int>& mu);

struct FeedbackPair {
  Matrix F;
  Matrix G;
  Matrix G_inv;  // V, the block-last rows of B_ca
};

/// Eliminates the free last rows of each block with u = F x + G v.
FeedbackPair CanonicalToBrunovsky(const Matrix& A_ca, const Matrix& B_ca,
                                  const std::vector<int>& mu);

/// Indices, canonical form, and the elimination feedback composed into
/// (T_jo, F_db, G). Throws StructureError for redundant inputs (mu_i = 0).
BrunovskyTransform ComputeBrunovskyTransform(const Matrix& A_co,
                                             const Matrix& B_co,
                                             double rank_tol = kDefaultRankTol);

struct FeedbackResiduals {
  double A_residual = 0.0;   // ||T (A + B F) T^-1 - A_b||_F
  double B_residual = 0.0;   // ||T B G - B_b||_F
  double nilpotency = 0.0;   // ||(A + B F)^mu||_F
  double T_inverse = 0.0;    // ||T T^-1 - I||_F
  double G_inverse = 0.0;
};

FeedbackResiduals ComputeResiduals(const Matrix& A_co, const Matrix& B_co,
                                   const BrunovskyTransform& bt);

/// (A_b'PA_b, B_b'PA_b, B_b'PB_b) by indexed copies of P, no arithmetic.
void StructuredQuadraticsInto(const Matrix& P, const std::vector<int>& mu,
                              StructuredQuadratics* out);
StructuredQuadratics ComputeStructuredQuadratics(const Matrix& P,
                                                 const std::vector<int>& mu);

/// Provider for the Riccati recursion on a Brunovsky pair.
class BrunovskyQuadratics final : public QuadraticsProvider {
 public:
  explicit BrunovskyQuadratics(std::vector<int> mu);

  int nx() const override { return nx_; }
  int nu() const override { return static_cast<int>(mu_.size()); }
  std::string_view name() const override { return "brunovsky-copy"; }

  void Quadratics(const Matrix& P, StructuredQuadratics* out) const override;
  void ApplyAt(const Vector& v, Vector* out) const override;
  void ApplyBt(const Vector& v, Vector* out) const override;
  void Propagate(const Vector& x, const Vector& u,
                 Vector* out) const override;

  const std::vector<int>& mu() const { return mu_; }

 private:
  std::vector<int> mu_;
  std::vector<int> start_;
  int nx_ = 0;
};

}  // namespace briccati
