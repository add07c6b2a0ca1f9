#include "briccati/riccati.hpp"

#include <string>

namespace briccati {

DenseQuadratics::DenseQuadratics(Matrix A, Matrix B)
    : A_(std::move(A)), B_(std::move(B)) {
  if (A_.rows() != A_.cols() || B_.rows() != A_.rows()) {
    throw Error("DenseQuadratics: A must be square and B must match its rows");
  }
}

void DenseQuadratics::Quadratics(const Matrix& P,
                                 StructuredQuadratics* out) const {
  CountCall();
  // P = Pi + Pi' with Pi the lower triangle and half the diagonal.
  Matrix Pi = P.triangularView<Eigen::Lower>();
  Pi.diagonal() *= 0.5;
  const Matrix PiA = Pi.triangularView<Eigen::Lower>() * A_;
  Matrix Y = A_.transpose() * PiA;
  out->AtPA = Y + Y.transpose();

  const Matrix PB = P.selfadjointView<Eigen::Lower>() * B_;
  out->BtPA.noalias() = PB.transpose() * A_;
  Matrix BtPB = B_.transpose() * PB;
  out->BtPB = 0.5 * (BtPB + BtPB.transpose());
}

void DenseQuadratics::ApplyAt(const Vector& v, Vector* out) const {
  out->noalias() = A_.transpose() * v;
}

void DenseQuadratics::ApplyBt(const Vector& v, Vector* out) const {
  out->noalias() = B_.transpose() * v;
}

void DenseQuadratics::Propagate(const Vector& x, const Vector& u,
                                Vector* out) const {
  out->noalias() = A_ * x;
  out->noalias() += B_ * u;
}

RiccatiBackwardResult BackwardPass(const LqOcpProblem& problem,
                                   const QuadraticsProvider& provider,
                                   const BackwardOptions& options) {
  const int N = problem.horizon;
  const int n = provider.nx();
  const int m = provider.nu();
  if (n != problem.nx || m != problem.nu ||
      static_cast<int>(problem.stages.size()) != N) {
    throw Error("BackwardPass: provider and problem dimensions differ");
  }

  RiccatiBackwardResult result;
  result.K.resize(N);
  result.k.resize(N);
  if (options.store_cost_to_go) {
    result.P.resize(N + 1);
    result.p.resize(N + 1);
  }

  Matrix P = 0.5 * (problem.terminal.Q + problem.terminal.Q.transpose());
  Vector p = problem.terminal.q;
  if (options.store_cost_to_go) {
    result.P[N] = P;
    result.p[N] = p;
  }

  StructuredQuadratics sq;
  Vector v(n), Atv(n), Btv(m);
  Matrix Re(m, m), H(m, n), W(m, n), P_next(n, n);
  Eigen::LLT<Matrix> llt(m);
  for (int k = N - 1; k >= 0; --k) {
    const StageData& s = problem.stages[k];
    provider.Quadratics(P, &sq);

    Re = s.R + sq.BtPB;
    Re = 0.5 * (Re + Re.transpose()).eval();
    llt.compute(Re);
    if (llt.info() != Eigen::Success) {
      throw FactorizationError(
          k, "R_e not positive definite at stage " + std::to_string(k));
    }
    H = s.S + sq.BtPA;

    v.noalias() = P * s.b;
    v += p;
    provider.ApplyAt(v, &Atv);
    provider.ApplyBt(v, &Btv);
    const Vector h = s.r + Btv;

    result.K[k] = -llt.solve(H);
    result.k[k] = -llt.solve(h);

    // K' R_e K = W'W with W = L^-1 H.
    W = llt.matrixL().solve(H);
    P_next = s.Q + sq.AtPA;
    P_next.noalias() -= W.transpose() * W;
    P = 0.5 * (P_next + P_next.transpose());

    p = s.q + Atv;
    p.noalias() += result.K[k].transpose() * h;

    if (options.store_cost_to_go) {
      result.P[k] = P;
      result.p[k] = p;
    }
  }
  return result;
}

Trajectory ForwardPass(const LqOcpProblem& problem,
                       const QuadraticsProvider& provider,
                       const RiccatiBackwardResult& backward) {
  const int N = problem.horizon;
  if (static_cast<int>(backward.K.size()) != N) {
    throw Error("ForwardPass: backward result has the wrong horizon");
  }
  Trajectory t;
  t.states.resize(N + 1);
  t.inputs.resize(N);
  t.states[0] = problem.x0;
  Vector next(problem.nx);
  for (int k = 0; k < N; ++k) {
    t.inputs[k].noalias() = backward.K[k] * t.states[k];
    t.inputs[k] += backward.k[k];
    provider.Propagate(t.states[k], t.inputs[k], &next);
    t.states[k + 1] = next + problem.stages[k].b;
  }
  return t;
}

Trajectory ForwardPass(const LqOcpProblem& problem,
                       const RiccatiBackwardResult& backward) {
  return ForwardPass(problem, DenseQuadratics(problem.A, problem.B), backward);
}

Trajectory SolveClassical(const LqOcpProblem& problem) {
  const DenseQuadratics provider(problem.A, problem.B);
  const auto backward = BackwardPass(problem, provider);
  return ForwardPass(problem, provider, backward);
}

}  // namespace briccati
