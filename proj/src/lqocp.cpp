#include "briccati/lqocp.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "briccati/staircase.hpp"

namespace briccati {
namespace {

std::string Shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void CheckShape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                const std::string& name, std::vector<std::string>* issues) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << name << " dimension mismatch: expected " << rows << "x" << cols
       << ", got " << Shape(m);
    issues->push_back(os.str());
  }
}

void CheckLength(const Vector& v, Eigen::Index size, const std::string& name,
                 std::vector<std::string>* issues) {
  if (v.size() != size) {
    std::ostringstream os;
    os << name << " dimension mismatch: expected length " << size << ", got "
       << v.size();
    issues->push_back(os.str());
  }
}

bool AllFinite(const Matrix& m) { return m.allFinite(); }

void CheckSymmetric(const Matrix& m, const std::string& name,
                    std::vector<std::string>* issues) {
  if (m.rows() != m.cols()) return;
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-12 * m.norm()) {
    std::ostringstream os;
    os << name << " not symmetric (||X - X'||_F = " << asym << ")";
    issues->push_back(os.str());
  }
}

class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

  Matrix Draw(int rows, int cols, double scale = 1.0) {
    Matrix m(rows, cols);
    // Fill column by column so the draw order is fixed.
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = scale * dist_(engine_);
    return m;
  }
  Vector DrawVector(int size) { return Draw(size, 1); }
  double Scalar() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

Matrix Symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// M'M / dim, symmetric to the last bit.
Matrix RandomGram(Gaussian& g, int dim) {
  const Matrix M = g.Draw(dim, dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  return Symmetrized(M.transpose() * M);
}

constexpr double kRegularizationR = 1e-3;
constexpr int kMaxAttempts = 100;

}  // namespace

std::string ToString(Coordinates c) {
  switch (c) {
    case Coordinates::kOriginal:
      return "original";
    case Coordinates::kControllable:
      return "controllable";
    case Coordinates::kBrunovsky:
      return "brunovsky";
  }
  return "unknown";
}

bool ValidationReport::Mentions(const std::string& needle) const {
  for (const auto& issue : issues) {
    if (issue.find(needle) != std::string::npos) return true;
  }
  return false;
}

ValidationReport Validate(const LqOcpProblem& p) {
  ValidationReport report;
  auto& issues = report.issues;
  if (p.nx < 1) issues.push_back("nx must be >= 1");
  if (p.nu < 1) issues.push_back("nu must be >= 1");
  if (p.horizon < 1) issues.push_back("N must be >= 1");
  if (!issues.empty()) return report;

  const int nx = p.nx;
  const int nu = p.nu;
  CheckShape(p.A, nx, nx, "A", &issues);
  CheckShape(p.B, nx, nu, "B", &issues);
  CheckLength(p.x0, nx, "x0", &issues);
  if (static_cast<int>(p.stages.size()) != p.horizon) {
    std::ostringstream os;
    os << "stages dimension mismatch: expected " << p.horizon
       << " stages, got " << p.stages.size();
    issues.push_back(os.str());
  }
  for (std::size_t k = 0; k < p.stages.size(); ++k) {
    const auto& s = p.stages[k];
    const std::string sub = "_" + std::to_string(k);
    const std::size_t before = issues.size();
    CheckShape(s.Q, nx, nx, "Q" + sub, &issues);
    CheckShape(s.R, nu, nu, "R" + sub, &issues);
    CheckShape(s.S, nu, nx, "S" + sub, &issues);
    CheckLength(s.q, nx, "q" + sub, &issues);
    CheckLength(s.r, nu, "r" + sub, &issues);
    CheckLength(s.b, nx, "b" + sub, &issues);
    if (issues.size() != before) continue;
    if (!AllFinite(s.Q) || !AllFinite(s.R) || !AllFinite(s.S) ||
        !s.q.allFinite() || !s.r.allFinite() || !s.b.allFinite()) {
      issues.push_back("stage " + std::to_string(k) + " has non-finite data");
      continue;
    }
    CheckSymmetric(s.Q, "Q" + sub, &issues);
    CheckSymmetric(s.R, "R" + sub, &issues);
    Eigen::LLT<Matrix> llt(Symmetrized(s.R));
    if (llt.info() != Eigen::Success) {
      issues.push_back("R" + sub + " not positive definite");
    }
  }
  const std::size_t before = issues.size();
  CheckShape(p.terminal.Q, nx, nx, "Q_N", &issues);
  CheckLength(p.terminal.q, nx, "q_N", &issues);
  if (issues.size() == before) CheckSymmetric(p.terminal.Q, "Q_N", &issues);
  if (p.A.allFinite() == false || p.B.allFinite() == false ||
      p.x0.allFinite() == false) {
    issues.push_back("A, B or x0 has non-finite entries");
  }
  if (p.ineq) {
    const auto ni = p.ineq->d.size();
    CheckShape(p.ineq->C, ni, nx, "C", &issues);
    CheckShape(p.ineq->D, ni, nu, "D", &issues);
  }
  return report;
}

void RequireValid(const LqOcpProblem& problem) {
  const auto report = Validate(problem);
  if (report.ok()) return;
  std::string msg = "invalid problem:";
  for (const auto& issue : report.issues) msg += "\n  " + issue;
  throw Error(msg);
}

LqOcpProblem RandomProblem(int nx, int nu, int horizon, std::uint64_t seed) {
  return RandomProblem(nx, nu, horizon, seed, RandomProblemOptions{});
}

LqOcpProblem RandomProblem(int nx, int nu, int horizon, std::uint64_t seed,
                           const RandomProblemOptions& options) {
  if (nu < 1 || nx < nu || horizon < 1) {
    throw Error("RandomProblem requires nx >= nu >= 1 and N >= 1");
  }
  const int nc = options.controllable_dim < 0 ? nx : options.controllable_dim;
  if (nc < nu || nc > nx) {
    throw Error("RandomProblem requires nu <= controllable_dim <= nx");
  }
  Gaussian g(seed);
  const double a_scale = 1.0 / std::sqrt(static_cast<double>(nx));

  LqOcpProblem p;
  p.nx = nx;
  p.nu = nu;
  p.horizon = horizon;
  bool found = false;
  for (int attempt = 0; attempt < kMaxAttempts && !found; ++attempt) {
    if (nc == nx) {
      p.A = g.Draw(nx, nx, a_scale);
      p.B = g.Draw(nx, nu);
      found = IsControllable(p.A, p.B);
      continue;
    }
    const int nuc = nx - nc;
    Matrix blocks = Matrix::Zero(nx, nx);
    blocks.topLeftCorner(nc, nc) = g.Draw(nc, nc, a_scale);
    blocks.topRightCorner(nc, nuc) = g.Draw(nc, nuc, a_scale);
    blocks.bottomRightCorner(nuc, nuc) = g.Draw(nuc, nuc, a_scale);
    Matrix b_blocks = Matrix::Zero(nx, nu);
    b_blocks.topRows(nc) = g.Draw(nc, nu);
    if (!IsControllable(blocks.topLeftCorner(nc, nc), b_blocks.topRows(nc))) {
      continue;
    }
    // Hide the structure behind a random orthogonal change of coordinates.
    const Matrix U = Eigen::HouseholderQR<Matrix>(g.Draw(nx, nx))
                         .householderQ() * Matrix::Identity(nx, nx);
    p.A = U.transpose() * blocks * U;
    p.B = U.transpose() * b_blocks;
    found = StaircaseDecompose(p.A, p.B).n_controllable == nc;
  }
  if (!found) {
    throw GenerationError("no pair with the requested controllability after " +
                          std::to_string(kMaxAttempts) + " attempts");
  }

  p.stages.resize(horizon);
  for (auto& s : p.stages) {
    if (options.dense_stage_terms) {
      const Matrix H = RandomGram(g, nx + nu);
      s.Q = H.topLeftCorner(nx, nx);
      s.S = H.bottomLeftCorner(nu, nx);
      s.R = H.bottomRightCorner(nu, nu) +
            kRegularizationR * Matrix::Identity(nu, nu);
      s.q = g.DrawVector(nx);
      s.r = g.DrawVector(nu);
      s.b = g.DrawVector(nx);
    } else {
      s.Q = RandomGram(g, nx);
      s.R = RandomGram(g, nu) + kRegularizationR * Matrix::Identity(nu, nu);
      s.S = Matrix::Zero(nu, nx);
      s.q = Vector::Zero(nx);
      s.r = Vector::Zero(nu);
      s.b = Vector::Zero(nx);
    }
  }
  p.terminal.Q = RandomGram(g, nx);
  p.terminal.q =
      options.dense_stage_terms ? g.DrawVector(nx) : Vector::Zero(nx);
  p.x0 = g.DrawVector(nx);

  if (options.num_inequalities > 0) {
    const int ni = options.num_inequalities;
    InequalityData ineq;
    ineq.C = g.Draw(ni, nx);
    ineq.D = g.Draw(ni, nu);
    ineq.d = g.DrawVector(ni).cwiseAbs().array() + 1.0;
    p.ineq = std::move(ineq);
  }
  return p;
}

double Objective(const LqOcpProblem& p, const Trajectory& t) {
  double cost = 0.0;
  for (int k = 0; k < p.horizon; ++k) {
    const auto& s = p.stages[k];
    const Vector& x = t.states[k];
    const Vector& u = t.inputs[k];
    cost += 0.5 * x.dot(s.Q * x) + u.dot(s.S * x) + 0.5 * u.dot(s.R * u) +
            x.dot(s.q) + u.dot(s.r);
  }
  const Vector& xN = t.states[p.horizon];
  cost += 0.5 * xN.dot(p.terminal.Q * xN) + xN.dot(p.terminal.q);
  return cost;
}

double DynamicsResidual(const LqOcpProblem& p, const Trajectory& t) {
  double res = (t.states[0] - p.x0).lpNorm<Eigen::Infinity>();
  for (int k = 0; k < p.horizon; ++k) {
    const Vector pred =
        p.A * t.states[k] + p.B * t.inputs[k] + p.stages[k].b;
    res = std::max(res, (t.states[k + 1] - pred).lpNorm<Eigen::Infinity>());
  }
  return res;
}

namespace {

double MaxAbs(const std::vector<Vector>& vs) {
  double m = 0.0;
  for (const auto& v : vs) {
    if (v.size() > 0) m = std::max(m, v.lpNorm<Eigen::Infinity>());
  }
  return m;
}

double MaxAbsDiff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return INFINITY;
    if (a[i].size() > 0) {
      m = std::max(m, (a[i] - b[i]).lpNorm<Eigen::Infinity>());
    }
  }
  return m;
}

double Relative(double diff, double scale) {
  return diff / (scale > 0.0 ? scale : 1.0);
}

}  // namespace

TrajectoryDifference RelativeDifference(const Trajectory& a,
                                        const Trajectory& b) {
  TrajectoryDifference d;
  d.states = Relative(MaxAbsDiff(a.states, b.states), MaxAbs(b.states));
  d.inputs = Relative(MaxAbsDiff(a.inputs, b.inputs), MaxAbs(b.inputs));
  return d;
}

}  // namespace briccati
