#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "briccati/common.hpp"

namespace briccati {

struct StageData {
  Matrix Q;  // n_x x n_x
  Matrix R;  // n_u x n_u
  Matrix S;  // n_u x n_x
  Vector q;  // n_x
  Vector r;  // n_u
  Vector b;  // n_x, dynamics offset
};

struct TerminalData {
  Matrix Q;
  Vector q;
};

/// Stage-wise inequalities C x_k + D u_k <= d, identical for every stage.
struct InequalityData {
  Matrix C;  // n_i x n_x
  Matrix D;  // n_i x n_u
  Vector d;  // n_i
};

/// Linear-quadratic optimal control problem over a time-invariant system
///
///   min  sum_k 1/2 [x;u]' [Q S'; S R] [x;u] + [x;u]'[q;r]
///        + 1/2 x_N' Q_N x_N + x_N' q_N
///   s.t. x_{k+1} = A x_k + B u_k + b_k,  x_0 given.
struct LqOcpProblem {
  int nx = 0;
  int nu = 0;
  int horizon = 0;
  Matrix A;
  Matrix B;
  std::vector<StageData> stages;
  TerminalData terminal;
  Vector x0;
  std::optional<InequalityData> ineq;
};

enum class Coordinates { kOriginal, kControllable, kBrunovsky };

std::string ToString(Coordinates c);

struct Trajectory {
  std::vector<Vector> states;  // N + 1 entries
  std::vector<Vector> inputs;  // N entries
  Coordinates coordinates = Coordinates::kOriginal;

  int horizon() const { return static_cast<int>(inputs.size()); }
};

struct ValidationReport {
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
  /// True when some issue contains `needle` as a substring.
  bool Mentions(const std::string& needle) const;
};

/// Checks dimensions, symmetry of Q_k/R_k/Q_N, and R_k > 0.
ValidationReport Validate(const LqOcpProblem& problem);

/// Throws briccati::Error listing the issues when Validate() is not ok.
void RequireValid(const LqOcpProblem& problem);

/// Knobs beyond the basic (n_x, n_u, N, seed) generator. Defaults reproduce
/// RandomProblem().
struct RandomProblemOptions {
  /// Draw non-zero S_k, q_k, r_k, b_k (stage Hessians stay PSD with R_k PD).
  bool dense_stage_terms = false;
  /// Dimension of the controllable subspace; -1 means fully controllable.
  /// Must satisfy n_u <= controllable_dim <= n_x otherwise.
  int controllable_dim = -1;
  /// Number of random stage inequalities to attach (0: none).
  int num_inequalities = 0;
};

/// Random controllable instance, deterministic in `seed`.
LqOcpProblem RandomProblem(int nx, int nu, int horizon, std::uint64_t seed);

LqOcpProblem RandomProblem(int nx, int nu, int horizon, std::uint64_t seed,
                           const RandomProblemOptions& options);

/// Objective value of `traj` (original coordinates), constant-free.
double Objective(const LqOcpProblem& problem, const Trajectory& traj);

/// max_k ||x_{k+1} - A x_k - B u_k - b_k||_inf, plus ||x_0 - x0||_inf.
double DynamicsResidual(const LqOcpProblem& problem, const Trajectory& traj);

struct TrajectoryDifference {
  double states = 0.0;  // relative, infinity norm over all stages
  double inputs = 0.0;

  double max() const { return states > inputs ? states : inputs; }
};

/// ||a - b||_inf / ||b||_inf separately for states and inputs; the
/// denominator falls back to 1 when `b` is identically zero.
TrajectoryDifference RelativeDifference(const Trajectory& a,
                                        const Trajectory& b);

}  // namespace briccati
