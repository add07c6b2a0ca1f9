#pragma once

#include <atomic>
#include <string_view>
#include <vector>

#include "briccati/lqocp.hpp"

namespace briccati {

/// The triple (A'PA, B'PA, B'PB) for a symmetric cost-to-go matrix P.
struct StructuredQuadratics {
  Matrix AtPA;  // n_x x n_x
  Matrix BtPA;  // n_u x n_x
  Matrix BtPB;  // n_u x n_u
};

/// Everything the recursion needs to know about (A, B). The dense provider
/// multiplies; the Brunovsky provider copies entries of P.
class QuadraticsProvider {
 public:
  virtual ~QuadraticsProvider() = default;

  virtual int nx() const = 0;
  virtual int nu() const = 0;
  virtual std::string_view name() const = 0;

  /// `P` must be symmetric with both triangles stored.
  virtual void Quadratics(const Matrix& P, StructuredQuadratics* out) const = 0;
  virtual void ApplyAt(const Vector& v, Vector* out) const = 0;
  virtual void ApplyBt(const Vector& v, Vector* out) const = 0;
  /// out = A x + B u
  virtual void Propagate(const Vector& x, const Vector& u,
                         Vector* out) const = 0;

  /// Number of Quadratics() calls since construction.
  std::size_t quadratics_calls() const { return calls_.load(); }

 protected:
  void CountCall() const { calls_.fetch_add(1, std::memory_order_relaxed); }

 private:
  mutable std::atomic<std::size_t> calls_{0};
};

/// Dense (A, B). A'PA uses the split P = Pi + Pi' with Pi lower triangular
/// (half diagonal): one triangular multiply, one general multiply, then the
/// symmetric completion.
class DenseQuadratics final : public QuadraticsProvider {
 public:
  DenseQuadratics(Matrix A, Matrix B);

  int nx() const override { return static_cast<int>(A_.rows()); }
  int nu() const override { return static_cast<int>(B_.cols()); }
  std::string_view name() const override { return "dense"; }

  void Quadratics(const Matrix& P, StructuredQuadratics* out) const override;
  void ApplyAt(const Vector& v, Vector* out) const override;
  void ApplyBt(const Vector& v, Vector* out) const override;
  void Propagate(const Vector& x, const Vector& u,
                 Vector* out) const override;

 private:
  Matrix A_;
  Matrix B_;
};

struct RiccatiBackwardResult {
  std::vector<Matrix> K;  // N gains, n_u x n_x
  std::vector<Vector> k;  // N feedforward terms
  // Cost-to-go, N + 1 entries each; empty unless requested.
  std::vector<Matrix> P;
  std::vector<Vector> p;
};

struct BackwardOptions {
  bool store_cost_to_go = false;
};

/// Backward sweep. `problem.A`/`problem.B` are ignored in favour of
/// `provider`, which must describe the same system.
/// Throws FactorizationError naming the stage if R_e is not positive definite.
RiccatiBackwardResult BackwardPass(const LqOcpProblem& problem,
                                   const QuadraticsProvider& provider,
                                   const BackwardOptions& options = {});

Trajectory ForwardPass(const LqOcpProblem& problem,
                       const QuadraticsProvider& provider,
                       const RiccatiBackwardResult& backward);

/// Convenience overload using DenseQuadratics(problem.A, problem.B).
Trajectory ForwardPass(const LqOcpProblem& problem,
                       const RiccatiBackwardResult& backward);

Trajectory SolveClassical(const LqOcpProblem& problem);

}  // namespace briccati
