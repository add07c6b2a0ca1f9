#pragma once

#include "briccati/lqocp.hpp"

namespace briccati {

/// The OCP as an equality-constrained QP over the stacked vector
/// (x_0, u_0, x_1, u_1, ..., x_{N-1}, u_{N-1}, x_N):
///
///   min 1/2 w'Hw + w'g   s.t.  E w = f.
///
/// The first n_x rows of E pin x_0, the remaining blocks encode
/// -A x_k - B u_k + x_{k+1} = b_k.
struct KktSystem {
  Matrix H;
  Vector g;
  Matrix E;
  Vector f;
};

KktSystem AssembleKkt(const LqOcpProblem& problem);

Vector StackTrajectory(const LqOcpProblem& problem, const Trajectory& traj);
Trajectory UnstackTrajectory(const LqOcpProblem& problem, const Vector& w);

struct KktSolution {
  Trajectory trajectory;
  Vector multipliers;
  /// ||[H E'; E 0][w; lambda] - [-g; f]||_inf after refinement.
  double residual = 0.0;
  double residual_bound = 0.0;  // 1e-9 (1 + ||g||_inf + ||f||_inf)
};

inline constexpr int kDefaultKktVariableCap = 5000;

/// Dense LU with partial pivoting on the full KKT matrix, plus one step of
/// iterative refinement. Throws briccati::Error above `variable_cap` primal
/// variables, DegenerateKktError when the matrix is numerically singular.
KktSolution SolveKktDetailed(const LqOcpProblem& problem,
                             int variable_cap = kDefaultKktVariableCap);

Trajectory SolveKkt(const LqOcpProblem& problem,
                    int variable_cap = kDefaultKktVariableCap);

}  // namespace briccati
