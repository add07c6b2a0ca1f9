#include "briccati/transform.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "briccati/kkt_oracle.hpp"
#include "briccati/riccati.hpp"
#include "test_util.hpp"

namespace briccati {
namespace {

RandomProblemOptions Dense(int controllable_dim = -1, int ineq = 0) {
  RandomProblemOptions o;
  o.dense_stage_terms = true;
  o.controllable_dim = controllable_dim;
  o.num_inequalities = ineq;
  return o;
}

KalmanDecomposition IdentityDecomposition(const LqOcpProblem& p) {
  KalmanDecomposition kd;
  kd.T = Matrix::Identity(p.nx, p.nx);
  kd.A_co = p.A;
  kd.B_co = p.B;
  kd.A_12 = Matrix(p.nx, 0);
  kd.A_uc = Matrix(0, 0);
  kd.n_controllable = p.nx;
  return kd;
}

BrunovskyTransform IdentityTransform(const std::vector<int>& mu) {
  BrunovskyTransform bt;
  bt.mu = mu;
  int n = 0;
  for (int m : mu) n += m;
  const int m = static_cast<int>(mu.size());
  bt.T = bt.T_inv = Matrix::Identity(n, n);
  bt.F = Matrix::Zero(m, n);
  bt.G = bt.G_inv = Matrix::Identity(m, m);
  return bt;
}

void ExpectSameData(const LqOcpProblem& a, const LqOcpProblem& b, double tol) {
  ASSERT_EQ(a.horizon, b.horizon);
  for (int k = 0; k < a.horizon; ++k) {
    EXPECT_LE((a.stages[k].Q - b.stages[k].Q).norm(), tol);
    EXPECT_LE((a.stages[k].R - b.stages[k].R).norm(), tol);
    EXPECT_LE((a.stages[k].S - b.stages[k].S).norm(), tol);
    EXPECT_LE((a.stages[k].q - b.stages[k].q).norm(), tol);
    EXPECT_LE((a.stages[k].r - b.stages[k].r).norm(), tol);
    EXPECT_LE((a.stages[k].b - b.stages[k].b).norm(), tol);
  }
  EXPECT_LE((a.terminal.Q - b.terminal.Q).norm(), tol);
  EXPECT_LE((a.terminal.q - b.terminal.q).norm(), tol);
  EXPECT_LE((a.x0 - b.x0).norm(), tol);
}

GTEST_TEST(Congruence, MatchesDenseProduct) {
  std::mt19937_64 rng(1);
  const Matrix Q = testing::RandomSymmetric(rng, 7);
  const Matrix M = testing::RandomMatrix(rng, 7, 4);
  const Matrix C = Congruence(Q, M);
  EXPECT_LT((C - M.transpose() * Q * M).norm(), 1e-13 * Q.norm() * M.squaredNorm());
  EXPECT_EQ(C, C.transpose());
}

GTEST_TEST(Reduce, IdentityWhenControllable) {
  const auto p = RandomProblem(5, 2, 4, 3, Dense());
  const auto red = ReduceToControllable(p, IdentityDecomposition(p));
  ExpectSameData(red.problem, p, 1e-14);
}

GTEST_TEST(Reduce, DecoupledUnstableMode) {
  auto p = testing::ScalarProblem();
  p.nx = 2;
  p.horizon = 4;
  p.A = (Matrix(2, 2) << 0, 0, 0, 2).finished();
  p.B = (Matrix(2, 1) << 1, 0).finished();
  StageData s;
  s.Q = Matrix::Identity(2, 2);
  s.R = Matrix::Ones(1, 1);
  s.S = Matrix::Zero(1, 2);
  s.q = Vector::Zero(2);
  s.r = Vector::Zero(1);
  s.b = Vector::Zero(2);
  p.stages.assign(4, s);
  p.terminal.Q = Matrix::Identity(2, 2);
  p.terminal.q = Vector::Zero(2);
  p.x0 = Vector::Ones(2);
  ASSERT_TRUE(Validate(p).ok());

  const auto kd = StaircaseDecompose(p.A, p.B);
  const auto red = ReduceToControllable(p, kd);
  ASSERT_EQ(kd.n_controllable, 1);
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(red.x_uc[k](0), std::ldexp(1.0, k));
  for (int k = 0; k < 4; ++k) EXPECT_EQ(red.problem.stages[k].b(0), 0.0);
}

GTEST_TEST(Reduce, RankOneInputMapsBackToFullOptimum) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = RandomProblem(3, 1, 6, 40 + seed, Dense(2));
    const auto kd = StaircaseDecompose(p.A, p.B);
    ASSERT_EQ(kd.n_controllable, 2);
    const auto red = ReduceToControllable(p, kd);
    const Trajectory xc = SolveKkt(red.problem);
    // Back to x = T1' x^c + T2' x^uc.
    Trajectory back;
    back.inputs = xc.inputs;
    for (int k = 0; k <= p.horizon; ++k) {
      back.states.push_back(kd.T.topRows(2).transpose() * xc.states[k] +
                            kd.T.bottomRows(1).transpose() * red.x_uc[k]);
    }
    EXPECT_LT(RelativeDifference(back, SolveKkt(p)).max(), 1e-8);
  }
}

GTEST_TEST(ToBrunovsky, IdentityTransform) {
  const auto bp = MakeBrunovskyPair({2, 3});
  LqOcpProblem p = RandomProblem(5, 2, 3, 9, Dense());
  p.A = bp.A;
  p.B = bp.B;
  ControllableReduction red;
  red.kd = IdentityDecomposition(p);
  red.problem = p;
  red.x_uc.assign(4, Vector(0));
  const auto out = ToBrunovskyOcp(red, IdentityTransform({2, 3}));
  ExpectSameData(out.problem, p, 0.0);
}

GTEST_TEST(ToBrunovsky, AlreadyBrunovskyChain) {
  LqOcpProblem p = testing::ScalarProblem();
  p.nx = 2;
  p.A = MakeBrunovskyPair({2}).A;
  p.B = MakeBrunovskyPair({2}).B;
  p.stages[0].Q = Matrix::Identity(2, 2);
  p.stages[0].S = Matrix::Zero(1, 2);
  p.stages[0].q = p.stages[0].b = Vector::Zero(2);
  p.terminal.Q = Matrix::Identity(2, 2);
  p.terminal.q = Vector::Zero(2);
  p.x0 = Vector::Ones(2);
  const auto kd = IdentityDecomposition(p);
  const auto bt = ComputeBrunovskyTransform(p.A, p.B);
  const auto out = ToBrunovskyOcp(ReduceToControllable(p, kd), bt);
  EXPECT_EQ(out.problem.stages[0].Q, Matrix::Identity(2, 2));
  EXPECT_EQ(out.problem.stages[0].R, Matrix::Ones(1, 1));
}

GTEST_TEST(ToBrunovsky, OracleOnBothSides) {
  const auto p = RandomProblem(6, 2, 8, 17, Dense());
  const auto kd = StaircaseDecompose(p.A, p.B);
  const auto red = ReduceToControllable(p, kd);
  const auto bt = ComputeBrunovskyTransform(kd.A_co, kd.B_co);
  const auto bocp = ToBrunovskyOcp(red, bt);
  const Trajectory zv = SolveKkt(bocp.problem);
  Trajectory xc;
  for (int k = 0; k <= p.horizon; ++k) {
    xc.states.push_back(bt.T_inv * zv.states[k]);
  }
  for (int k = 0; k < p.horizon; ++k) {
    xc.inputs.push_back(bt.F * xc.states[k] + bt.G * zv.inputs[k]);
  }
  EXPECT_LT(RelativeDifference(xc, SolveKkt(red.problem)).max(), 1e-8);
}

GTEST_TEST(ToBrunovsky, FusedMatchesTwoStep) {
  for (int nc : {-1, 5}) {
    const auto p = RandomProblem(8, 2, 6, 23, Dense(nc));
    const auto kd = StaircaseDecompose(p.A, p.B);
    const auto red = ReduceToControllable(p, kd);
    const auto bt = ComputeBrunovskyTransform(kd.A_co, kd.B_co);
    const auto two = ToBrunovskyOcp(red, bt);
    const auto fused = BuildBrunovskyOcp(p, kd, red.x_uc, bt);
    double scale = 1.0;
    for (const auto& s : two.problem.stages) scale = std::max(scale, s.Q.norm());
    ExpectSameData(fused.problem, two.problem, 1e-10 * scale);
    for (int k = 0; k < p.horizon; ++k) {
      Eigen::LLT<Matrix> llt(fused.problem.stages[k].R);
      EXPECT_EQ(llt.info(), Eigen::Success);
    }
  }
}

GTEST_TEST(Recover, IdentityTransforms) {
  std::mt19937_64 rng(2);
  const auto p = RandomProblem(5, 2, 3, 1);
  const auto kd = IdentityDecomposition(p);
  Trajectory z;
  for (int k = 0; k <= 3; ++k) z.states.push_back(testing::RandomMatrix(rng, 5, 1));
  for (int k = 0; k < 3; ++k) z.inputs.push_back(testing::RandomMatrix(rng, 2, 1));
  const auto x = RecoverSolution(z, IdentityTransform({3, 2}), kd,
                                 std::vector<Vector>(4, Vector(0)));
  EXPECT_TRUE(testing::BitEqual(x, z));
}

GTEST_TEST(Recover, ExampleOneFeedback) {
  // x = T^-1 z, u = [1 0] x + G v must reproduce the z-chain dynamics.
  LqOcpProblem p = testing::ScalarProblem();
  p.nx = 2;
  p.A = (Matrix(2, 2) << 0, -1, 1, -1).finished();
  p.B = (Matrix(2, 1) << 1, 0).finished();
  const auto kd = IdentityDecomposition(p);
  const auto bt = ComputeBrunovskyTransform(p.A, p.B);
  ASSERT_EQ(bt.F, (Matrix(1, 2) << 1, 0).finished());
  const auto pair = MakeBrunovskyPair(bt.mu);
  std::mt19937_64 rng(3);
  Trajectory z;
  z.states.push_back(testing::RandomMatrix(rng, 2, 1));
  for (int k = 0; k < 5; ++k) {
    z.inputs.push_back(testing::RandomMatrix(rng, 1, 1));
    z.states.push_back(pair.A * z.states[k] + pair.B * z.inputs[k]);
  }
  const auto x = RecoverSolution(z, bt, kd, std::vector<Vector>(6, Vector(0)));
  for (int k = 0; k < 5; ++k) {
    EXPECT_LT((x.inputs[k] - bt.F * x.states[k] - bt.G * z.inputs[k]).norm(), 1e-14);
    EXPECT_LT((x.states[k + 1] - p.A * x.states[k] - p.B * x.inputs[k]).norm(), 1e-12);
  }
}

GTEST_TEST(Recover, SatisfiesDynamics) {
  const auto p = RandomProblem(9, 3, 10, 5, Dense(7));
  const auto kd = StaircaseDecompose(p.A, p.B);
  const auto x_uc = RolloutUncontrollable(p, kd);
  const auto bt = ComputeBrunovskyTransform(kd.A_co, kd.B_co);
  const auto bocp = BuildBrunovskyOcp(p, kd, x_uc, bt);
  const auto z = SolveClassical(bocp.problem);
  const auto x = RecoverSolution(z, bt, kd, x_uc);
  double scale = 1.0;
  for (const auto& s : x.states) scale = std::max(scale, s.lpNorm<Eigen::Infinity>());
  EXPECT_LT(DynamicsResidual(p, x), 1e-10 * scale);
}

GTEST_TEST(ChainEquivalence, CostMatchesClassical) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int nc = seed % 2 == 0 ? -1 : 6;
    const auto p = RandomProblem(9, 2, 12, 500 + seed, Dense(nc));
    const auto kd = StaircaseDecompose(p.A, p.B);
    const auto x_uc = RolloutUncontrollable(p, kd);
    const auto bt = ComputeBrunovskyTransform(kd.A_co, kd.B_co);
    const auto bocp = BuildBrunovskyOcp(p, kd, x_uc, bt);
    const auto x = RecoverSolution(SolveClassical(bocp.problem), bt, kd, x_uc);
    const auto ref = SolveClassical(p);
    EXPECT_LT(RelativeDifference(x, ref).max(), 1e-7);
    const double c_ref = testing::ReferenceCost(p, ref);
    EXPECT_NEAR(testing::ReferenceCost(p, x), c_ref, 1e-7 * std::abs(c_ref));
  }
}

GTEST_TEST(Inequalities, InputBoxGainsStateCoupling) {
  auto p = RandomProblem(4, 2, 3, 8);
  InequalityData in;
  in.C = Matrix::Zero(4, 4);
  in.D.resize(4, 2);
  in.D << 1, 0, -1, 0, 0, 1, 0, -1;
  in.d = Vector::Ones(4);
  p.ineq = in;
  const auto kd = StaircaseDecompose(p.A, p.B);
  const auto red = ReduceToControllable(p, kd);
  const auto bt = ComputeBrunovskyTransform(kd.A_co, kd.B_co);
  const auto ti = TransformInequalities(red, bt);
  EXPECT_LT((ti.brunovsky.C - in.D * bt.F * bt.T_inv).norm(), 1e-12);
  EXPECT_GT(ti.brunovsky.C.norm(), 0.1);
  EXPECT_EQ(ti.brunovsky.D, in.D * bt.G);
  for (const auto& rhs : ti.brunovsky.rhs) EXPECT_EQ(rhs, in.d);
}

GTEST_TEST(Inequalities, UnchangedUnderIdentity) {
  auto p = RandomProblem(5, 2, 3, 8, Dense(-1, 3));
  const auto kd = IdentityDecomposition(p);
  const auto red = ReduceToControllable(p, kd);
  const auto ti = TransformInequalities(red, IdentityTransform({3, 2}));
  EXPECT_EQ(ti.brunovsky.C, p.ineq->C);
  EXPECT_EQ(ti.brunovsky.D, p.ineq->D);
}

GTEST_TEST(Inequalities, RequiresData) {
  const auto p = RandomProblem(3, 1, 2, 8);
  const auto kd = StaircaseDecompose(p.A, p.B);
  const auto red = ReduceToControllable(p, kd);
  const auto bt = ComputeBrunovskyTransform(kd.A_co, kd.B_co);
  EXPECT_THROW(TransformInequalities(red, bt), Error);
}

GTEST_TEST(Parallel, StageLoopsAreDeterministic) {
  const auto p = RandomProblem(12, 3, 37, 6, Dense(10));
  const auto kd = StaircaseDecompose(p.A, p.B);
  const auto x_uc = RolloutUncontrollable(p, kd, 1);
  const auto bt = ComputeBrunovskyTransform(kd.A_co, kd.B_co);
  const auto one = BuildBrunovskyOcp(p, kd, x_uc, bt, 1);
  const auto many = BuildBrunovskyOcp(p, kd, x_uc, bt, 8);
  ExpectSameData(one.problem, many.problem, 0.0);
}

}  // namespace
}  // namespace briccati
