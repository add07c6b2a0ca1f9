#include "briccati/transform.hpp"

#include "briccati/parallel.hpp"

namespace briccati {
namespace {

Matrix Sym(const Matrix& X) { return 0.5 * (X + X.transpose()); }

void CheckProblemMatchesKd(const LqOcpProblem& problem,
                           const KalmanDecomposition& kd) {
  if (kd.T.rows() != problem.nx || kd.B_co.cols() != problem.nu) {
    throw Error("Kalman decomposition does not match the problem dimensions");
  }
}

}  // namespace

Matrix Congruence(const Matrix& Q, const Matrix& M) {
  // Q = Pi + Pi' with Pi the lower triangle and half the diagonal, so
  // M'QM = Z + Z' with Z = M'(Pi M); exactly symmetric by construction.
  Matrix Pi = Q.triangularView<Eigen::Lower>();
  Pi.diagonal() *= 0.5;
  Matrix Y(Q.rows(), M.cols());
  Y.noalias() = Pi.triangularView<Eigen::Lower>() * M;
  Matrix Z(M.cols(), M.cols());
  Z.noalias() = M.transpose() * Y;
  return Z + Z.transpose();
}

std::vector<Vector> RolloutUncontrollable(const LqOcpProblem& problem,
                                          const KalmanDecomposition& kd,
                                          int thread_budget) {
  CheckProblemMatchesKd(problem, kd);
  const int N = problem.horizon;
  const auto T2 = kd.T.bottomRows(kd.n_uncontrollable());

  std::vector<Vector> b_uc(N);
  ParallelFor(N, thread_budget, [&](int k) {
    b_uc[k].noalias() = T2 * problem.stages[k].b;
  });

  std::vector<Vector> x_uc(N + 1);
  x_uc[0].noalias() = T2 * problem.x0;
  for (int k = 0; k < N; ++k) {
    x_uc[k + 1].noalias() = kd.A_uc * x_uc[k];
    x_uc[k + 1] += b_uc[k];
  }
  return x_uc;
}

ControllableReduction ReduceToControllable(const LqOcpProblem& problem,
                                           const KalmanDecomposition& kd,
                                           int thread_budget) {
  CheckProblemMatchesKd(problem, kd);
  const int N = problem.horizon;
  const int nc = kd.n_controllable;
  const int nuc = kd.n_uncontrollable();
  const Matrix T1t = kd.T.topRows(nc).transpose();  // n x nc
  const auto T2 = kd.T.bottomRows(nuc);

  ControllableReduction red;
  red.kd = kd;
  red.x_uc = RolloutUncontrollable(problem, kd, thread_budget);

  LqOcpProblem& rp = red.problem;
  rp.nx = nc;
  rp.nu = problem.nu;
  rp.horizon = N;
  rp.A = kd.A_co;
  rp.B = kd.B_co;
  rp.stages.resize(N);
  ParallelFor(N, thread_budget, [&](int k) {
    const StageData& s = problem.stages[k];
    StageData& o = rp.stages[k];
    o.Q = Congruence(s.Q, T1t);
    o.S.noalias() = s.S * T1t;
    o.R = s.R;
    o.b.noalias() = T1t.transpose() * s.b;
    if (nuc > 0) {
      // x = T1' x^c + y with y = T2' x^uc fixed: Q and S couple y into the
      // linear terms.
      const Vector y = T2.transpose() * red.x_uc[k];
      o.q.noalias() = T1t.transpose() * (s.q + s.Q * y);
      o.r = s.r + s.S * y;
      o.b.noalias() += kd.A_12 * red.x_uc[k];
    } else {
      o.q.noalias() = T1t.transpose() * s.q;
      o.r = s.r;
    }
  });
  rp.terminal.Q = Congruence(problem.terminal.Q, T1t);
  if (nuc > 0) {
    const Vector y = T2.transpose() * red.x_uc[N];
    rp.terminal.q =
        T1t.transpose() * (problem.terminal.q + problem.terminal.Q * y);
  } else {
    rp.terminal.q = T1t.transpose() * problem.terminal.q;
  }
  rp.x0 = T1t.transpose() * problem.x0;

  if (problem.ineq) {
    const InequalityData& in = *problem.ineq;
    StageInequalities si;
    si.C = in.C * T1t;
    si.D = in.D;
    si.rhs.resize(N);
    const Matrix C_uc = in.C * T2.transpose();
    ParallelFor(N, thread_budget, [&](int k) {
      si.rhs[k] = in.d;
      if (nuc > 0) si.rhs[k].noalias() -= C_uc * red.x_uc[k];
    });
    red.ineq = std::move(si);
  }
  return red;
}

BrunovskyOcp ToBrunovskyOcp(const ControllableReduction& red,
                            const BrunovskyTransform& bt, int thread_budget) {
  const LqOcpProblem& cp = red.problem;
  if (bt.nx() != cp.nx || bt.nu() != cp.nu) {
    throw Error("Brunovsky transform does not match the reduced problem");
  }
  const int N = cp.horizon;
  const Matrix L = bt.F * bt.T_inv;  // u-part of z -> x^c feedback

  BrunovskyOcp out;
  out.bt = bt;
  LqOcpProblem& bp = out.problem;
  const BrunovskyPair pair = MakeBrunovskyPair(bt.mu);
  bp.nx = cp.nx;
  bp.nu = cp.nu;
  bp.horizon = N;
  bp.A = pair.A;
  bp.B = pair.B;
  bp.stages.resize(N);
  ParallelFor(N, thread_budget, [&](int k) {
    const StageData& s = cp.stages[k];
    StageData& o = bp.stages[k];
    const Matrix RL = s.R * L;
    Matrix SM = s.S * bt.T_inv;
    // u = L z + G v also feeds the cross term u'Sx into the z-block.
    Matrix LSM = L.transpose() * SM;
    o.Q = Congruence(s.Q, bt.T_inv);
    o.Q.noalias() += L.transpose() * RL;
    o.Q += LSM + LSM.transpose();
    o.Q = Sym(o.Q);
    o.R = Sym(bt.G.transpose() * s.R * bt.G);
    SM += RL;
    o.S.noalias() = bt.G.transpose() * SM;
    o.q.noalias() = bt.T_inv.transpose() * s.q;
    o.q.noalias() += L.transpose() * s.r;
    o.r.noalias() = bt.G.transpose() * s.r;
    o.b.noalias() = bt.T * s.b;
  });
  bp.terminal.Q = Congruence(cp.terminal.Q, bt.T_inv);
  bp.terminal.q = bt.T_inv.transpose() * cp.terminal.q;
  bp.x0 = bt.T * cp.x0;
  return out;
}

BrunovskyOcp BuildBrunovskyOcp(const LqOcpProblem& problem,
                               const KalmanDecomposition& kd,
                               const std::vector<Vector>& x_uc,
                               const BrunovskyTransform& bt,
                               int thread_budget) {
  CheckProblemMatchesKd(problem, kd);
  const int N = problem.horizon;
  const int nc = kd.n_controllable;
  const int nuc = kd.n_uncontrollable();
  if (bt.nx() != nc || bt.nu() != problem.nu) {
    throw Error("Brunovsky transform does not match the decomposition");
  }
  const auto T1 = kd.T.topRows(nc);
  const auto T2 = kd.T.bottomRows(nuc);
  const Matrix M = T1.transpose() * bt.T_inv;  // z -> x (controllable part)
  const Matrix L = bt.F * bt.T_inv;

  BrunovskyOcp out;
  out.bt = bt;
  LqOcpProblem& bp = out.problem;
  const BrunovskyPair pair = MakeBrunovskyPair(bt.mu);
  bp.nx = nc;
  bp.nu = problem.nu;
  bp.horizon = N;
  bp.A = pair.A;
  bp.B = pair.B;
  bp.stages.resize(N);
  ParallelFor(N, thread_budget, [&](int k) {
    const StageData& s = problem.stages[k];
    StageData& o = bp.stages[k];
    const Matrix RL = s.R * L;
    Matrix SM = s.S * M;
    Matrix LSM = L.transpose() * SM;
    o.Q = Congruence(s.Q, M);
    o.Q.noalias() += L.transpose() * RL;
    o.Q += LSM + LSM.transpose();
    o.Q = Sym(o.Q);
    o.R = Sym(bt.G.transpose() * s.R * bt.G);
    SM += RL;
    o.S.noalias() = bt.G.transpose() * SM;
    Vector bc = T1 * s.b;
    if (nuc > 0) {
      const Vector y = T2.transpose() * x_uc[k];
      const Vector qy = s.q + s.Q * y;
      const Vector ry = s.r + s.S * y;
      o.q.noalias() = M.transpose() * qy;
      o.q.noalias() += L.transpose() * ry;
      o.r.noalias() = bt.G.transpose() * ry;
      bc.noalias() += kd.A_12 * x_uc[k];
    } else {
      o.q.noalias() = M.transpose() * s.q;
      o.q.noalias() += L.transpose() * s.r;
      o.r.noalias() = bt.G.transpose() * s.r;
    }
    o.b.noalias() = bt.T * bc;
  });
  bp.terminal.Q = Congruence(problem.terminal.Q, M);
  if (nuc > 0) {
    const Vector y = T2.transpose() * x_uc[N];
    bp.terminal.q =
        M.transpose() * (problem.terminal.q + problem.terminal.Q * y);
  } else {
    bp.terminal.q = M.transpose() * problem.terminal.q;
  }
  bp.x0 = bt.T * (T1 * problem.x0);
  return out;
}

TransformedInequalities TransformInequalities(const ControllableReduction& red,
                                              const BrunovskyTransform& bt) {
  if (!red.ineq) throw Error("TransformInequalities: problem has no inequalities");
  TransformedInequalities out;
  out.controllable = *red.ineq;
  out.brunovsky.C = (red.ineq->C + red.ineq->D * bt.F) * bt.T_inv;
  out.brunovsky.D = red.ineq->D * bt.G;
  out.brunovsky.rhs = red.ineq->rhs;
  return out;
}

Trajectory RecoverSolution(const Trajectory& z_traj,
                           const BrunovskyTransform& bt,
                           const KalmanDecomposition& kd,
                           const std::vector<Vector>& x_uc,
                           int thread_budget) {
  const int N = z_traj.horizon();
  const int nc = kd.n_controllable;
  const int nuc = kd.n_uncontrollable();
  if (static_cast<int>(z_traj.states.size()) != N + 1 ||
      static_cast<int>(x_uc.size()) != N + 1 || bt.nx() != nc) {
    throw Error("RecoverSolution: inconsistent trajectory dimensions");
  }
  const auto T1 = kd.T.topRows(nc);
  const auto T2 = kd.T.bottomRows(nuc);

  Trajectory out;
  out.coordinates = Coordinates::kOriginal;
  out.states.resize(N + 1);
  out.inputs.resize(N);
  ParallelFor(N + 1, thread_budget, [&](int k) {
    const Vector xc = bt.T_inv * z_traj.states[k];
    out.states[k].noalias() = T1.transpose() * xc;
    if (nuc > 0) out.states[k].noalias() += T2.transpose() * x_uc[k];
    if (k < N) {
      out.inputs[k].noalias() = bt.F * xc;
      out.inputs[k].noalias() += bt.G * z_traj.inputs[k];
    }
  });
  return out;
}

Trajectory RecoverSolution(const Trajectory& z_traj,
                           const BrunovskyTransform& bt,
                           const ControllableReduction& red,
                           int thread_budget) {
  return RecoverSolution(z_traj, bt, red.kd, red.x_uc, thread_budget);
}

Trajectory ToControllableCoordinates(const Trajectory& traj,
                                     const KalmanDecomposition& kd) {
  const auto T1 = kd.T.topRows(kd.n_controllable);
  Trajectory out;
  out.coordinates = Coordinates::kControllable;
  out.inputs = traj.inputs;
  for (const auto& x : traj.states) out.states.push_back(T1 * x);
  return out;
}

Trajectory ToBrunovskyCoordinates(const Trajectory& controllable,
                                  const BrunovskyTransform& bt) {
  Trajectory out;
  out.coordinates = Coordinates::kBrunovsky;
  for (const auto& x : controllable.states) out.states.push_back(bt.T * x);
  for (std::size_t k = 0; k < controllable.inputs.size(); ++k) {
    out.inputs.push_back(
        bt.G_inv * (controllable.inputs[k] - bt.F * controllable.states[k]));
  }
  return out;
}

}  // namespace briccati
