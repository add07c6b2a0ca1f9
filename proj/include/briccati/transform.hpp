#pragma once

#include <optional>
#include <vector>

#include "briccati/brunovsky.hpp"
#include "briccati/lqocp.hpp"
#include "briccati/staircase.hpp"

namespace briccati {

/// Per-stage inequalities  C y_k + D w_k <= rhs[k],  k = 0..N-1.
struct StageInequalities {
  Matrix C;
  Matrix D;
  std::vector<Vector> rhs;
};

/// The problem restricted to the controllable coordinates x^c, with the
/// uncontrollable states rolled out ahead of time.
struct ControllableReduction {
  KalmanDecomposition kd;
  std::vector<Vector> x_uc;  // N + 1 entries
  /// Reduced problem: nx = n_c, A = A_co, B = B_co, b_k = b_k^co, x0 = x0^c.
  /// q_k and r_k include the coupling with x_k^uc through Q_k and S_k, so
  /// the reduced optimum equals the original one when x^uc != 0.
  LqOcpProblem problem;
  std::optional<StageInequalities> ineq;  // C^c x^c + D u <= d - C^uc x^uc
};

struct BrunovskyOcp {
  BrunovskyTransform bt;
  /// nx = sum(mu), A = A_b, B = B_b, data in (z, v) coordinates.
  LqOcpProblem problem;
};

/// b_k^uc = (T b_k)_uc in parallel, then the serial rollout
/// x_{k+1}^uc = A_uc x_k^uc + b_k^uc from (T x0)_uc.
std::vector<Vector> RolloutUncontrollable(const LqOcpProblem& problem,
                                          const KalmanDecomposition& kd,
                                          int thread_budget = 1);

ControllableReduction ReduceToControllable(const LqOcpProblem& problem,
                                           const KalmanDecomposition& kd,
                                           int thread_budget = 1);

BrunovskyOcp ToBrunovskyOcp(const ControllableReduction& red,
                            const BrunovskyTransform& bt,
                            int thread_budget = 1);

/// One-step version of ReduceToControllable followed by ToBrunovskyOcp: the
/// two state congruences are composed into a single n_x x n_c map, so each
/// stage pays for one congruence instead of two.
BrunovskyOcp BuildBrunovskyOcp(const LqOcpProblem& problem,
                               const KalmanDecomposition& kd,
                               const std::vector<Vector>& x_uc,
                               const BrunovskyTransform& bt,
                               int thread_budget = 1);

struct TransformedInequalities {
  StageInequalities controllable;  // in (x^c, u)
  StageInequalities brunovsky;     // in (z, v)
};

/// Requires `red.ineq`; throws briccati::Error otherwise.
TransformedInequalities TransformInequalities(const ControllableReduction& red,
                                              const BrunovskyTransform& bt);

/// z, v -> x^c = T_jo^-1 z, u = F_db x^c + G v -> x = T_kd' [x^c; x^uc].
Trajectory RecoverSolution(const Trajectory& z_traj,
                           const BrunovskyTransform& bt,
                           const KalmanDecomposition& kd,
                           const std::vector<Vector>& x_uc,
                           int thread_budget = 1);

Trajectory RecoverSolution(const Trajectory& z_traj,
                           const BrunovskyTransform& bt,
                           const ControllableReduction& red,
                           int thread_budget = 1);

/// Maps original-coordinate states/inputs forward along the chain; used to
/// transport trajectories and feasible points in tests.
Trajectory ToControllableCoordinates(const Trajectory& traj,
                                     const KalmanDecomposition& kd);
Trajectory ToBrunovskyCoordinates(const Trajectory& controllable,
                                  const BrunovskyTransform& bt);

/// Symmetric M' Q M for symmetric Q, via the split Q = Pi + Pi'.
Matrix Congruence(const Matrix& Q, const Matrix& M);

}  // namespace briccati
