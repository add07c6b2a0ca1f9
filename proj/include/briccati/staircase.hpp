#pragma once

#include <vector>

#include "briccati/common.hpp"

namespace briccati {

/// Orthogonal Kalman controllability decomposition
///
///   T A T' = [A_co A_12; 0 A_uc],   T B = [B_co; 0].
struct KalmanDecomposition {
  Matrix T;  // orthogonal, n_x x n_x
  Matrix A_co;
  Matrix A_12;
  Matrix A_uc;
  Matrix B_co;
  int n_controllable = 0;
  /// Row counts of the staircase steps; they sum to n_controllable.
  std::vector<int> step_ranks;

  int n_uncontrollable() const {
    return static_cast<int>(T.rows()) - n_controllable;
  }
};

/// Staircase algorithm. Each step takes an SVD of the current sub-diagonal
/// block, decides its rank with
///     #{ sigma_i > rank_tol * max(||A||_F, ||B||_F) },
/// and compresses it with a Householder reflection built from the leading
/// left singular vectors.
KalmanDecomposition StaircaseDecompose(const Matrix& A, const Matrix& B,
                                       double rank_tol = kDefaultRankTol);

/// Controllability indices in natural input order. Candidates b_i, A b_i,
/// A^2 b_i, ... are visited in degree order and accepted greedily while they
/// enlarge the span; an input whose first column is rejected gets index 0.
/// Throws StructureError if the accepted columns do not reach dimension
/// A_co.rows().
std::vector<int> ControllabilityIndices(const Matrix& A_co, const Matrix& B_co,
                                        double rank_tol = kDefaultRankTol);

/// True when StaircaseDecompose finds the whole state space controllable.
bool IsControllable(const Matrix& A, const Matrix& B,
                    double rank_tol = kDefaultRankTol);

}  // namespace briccati
