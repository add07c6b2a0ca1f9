#include "briccati/kkt_oracle.hpp"

#include <sstream>

namespace briccati {
namespace {

int StageOffset(const LqOcpProblem& p, int k) { return k * (p.nx + p.nu); }

int VariableCount(const LqOcpProblem& p) {
  return p.nx * (p.horizon + 1) + p.nu * p.horizon;
}

}  // namespace

KktSystem AssembleKkt(const LqOcpProblem& problem) {
  const int n = problem.nx;
  const int m = problem.nu;
  const int N = problem.horizon;
  const int nv = VariableCount(problem);
  const int nc = n * (N + 1);

  KktSystem sys;
  sys.H = Matrix::Zero(nv, nv);
  sys.g = Vector::Zero(nv);
  sys.E = Matrix::Zero(nc, nv);
  sys.f = Vector::Zero(nc);

  for (int k = 0; k < N; ++k) {
    const StageData& s = problem.stages[k];
    const int o = StageOffset(problem, k);
    sys.H.block(o, o, n, n) = s.Q;
    sys.H.block(o + n, o + n, m, m) = s.R;
    sys.H.block(o + n, o, m, n) = s.S;
    sys.H.block(o, o + n, n, m) = s.S.transpose();
    sys.g.segment(o, n) = s.q;
    sys.g.segment(o + n, m) = s.r;
  }
  const int oN = StageOffset(problem, N);
  sys.H.block(oN, oN, n, n) = problem.terminal.Q;
  sys.g.segment(oN, n) = problem.terminal.q;

  sys.E.block(0, 0, n, n).setIdentity();
  sys.f.head(n) = problem.x0;
  for (int k = 0; k < N; ++k) {
    const int row = n * (k + 1);
    const int o = StageOffset(problem, k);
    sys.E.block(row, o, n, n) = -problem.A;
    sys.E.block(row, o + n, n, m) = -problem.B;
    sys.E.block(row, o + n + m, n, n).setIdentity();
    sys.f.segment(row, n) = problem.stages[k].b;
  }
  return sys;
}

Vector StackTrajectory(const LqOcpProblem& problem, const Trajectory& traj) {
  const int n = problem.nx;
  const int m = problem.nu;
  const int N = problem.horizon;
  if (traj.horizon() != N) throw Error("StackTrajectory: horizon mismatch");
  Vector w(VariableCount(problem));
  for (int k = 0; k < N; ++k) {
    const int o = StageOffset(problem, k);
    w.segment(o, n) = traj.states[k];
    w.segment(o + n, m) = traj.inputs[k];
  }
  w.segment(StageOffset(problem, N), n) = traj.states[N];
  return w;
}

Trajectory UnstackTrajectory(const LqOcpProblem& problem, const Vector& w) {
  const int n = problem.nx;
  const int m = problem.nu;
  const int N = problem.horizon;
  if (w.size() != VariableCount(problem)) {
    throw Error("UnstackTrajectory: vector length mismatch");
  }
  Trajectory t;
  t.states.resize(N + 1);
  t.inputs.resize(N);
  for (int k = 0; k < N; ++k) {
    const int o = StageOffset(problem, k);
    t.states[k] = w.segment(o, n);
    t.inputs[k] = w.segment(o + n, m);
  }
  t.states[N] = w.segment(StageOffset(problem, N), n);
  return t;
}

KktSolution SolveKktDetailed(const LqOcpProblem& problem, int variable_cap) {
  RequireValid(problem);
  const int nv = VariableCount(problem);
  if (nv > variable_cap) {
    std::ostringstream os;
    os << "KKT oracle: " << nv << " variables exceed the cap of "
       << variable_cap;
    throw Error(os.str());
  }
  const KktSystem sys = AssembleKkt(problem);
  const int nc = static_cast<int>(sys.E.rows());
  const int dim = nv + nc;

  Matrix K = Matrix::Zero(dim, dim);
  K.topLeftCorner(nv, nv) = sys.H;
  K.topRightCorner(nv, nc) = sys.E.transpose();
  K.bottomLeftCorner(nc, nv) = sys.E;
  Vector rhs(dim);
  rhs.head(nv) = -sys.g;
  rhs.tail(nc) = sys.f;

  const Eigen::PartialPivLU<Matrix> lu(K);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "KKT matrix is numerically singular (reciprocal condition "
       << rcond << "); the problem is not strictly convex on the dynamics";
    throw DegenerateKktError(os.str());
  }
  Vector sol = lu.solve(rhs);
  const Vector r0 = rhs - K * sol;
  sol += lu.solve(r0);
  if (!sol.allFinite()) throw DegenerateKktError("KKT solve produced non-finite values");

  KktSolution out;
  out.trajectory = UnstackTrajectory(problem, sol.head(nv));
  out.multipliers = sol.tail(nc);
  out.residual = (K * sol - rhs).lpNorm<Eigen::Infinity>();
  out.residual_bound = 1e-9 * (1.0 + sys.g.lpNorm<Eigen::Infinity>() +
                               sys.f.lpNorm<Eigen::Infinity>());
  return out;
}

Trajectory SolveKkt(const LqOcpProblem& problem, int variable_cap) {
  return SolveKktDetailed(problem, variable_cap).trajectory;
}

}  // namespace briccati
