#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "briccati/lqocp.hpp"

namespace briccati {

enum class Method { kClassical, kBrunovsky };

std::string_view ToString(Method m);
/// Accepts "classical" / "brunovsky"; throws briccati::Error otherwise.
Method ParseMethod(std::string_view name);

struct SolveOptions {
  Method method = Method::kBrunovsky;
  int thread_budget = 1;
  double rank_tol = kDefaultRankTol;
  bool collect_timings = true;
};

/// Wall-clock seconds per pipeline phase. The classical method only has a
/// riccati phase.
struct PhaseTimings {
  double decompose = 0.0;
  double transform = 0.0;
  double riccati = 0.0;
  double recover = 0.0;

  double total() const { return decompose + transform + riccati + recover; }
};

struct SolveReport {
  Trajectory trajectory;  // original coordinates
  PhaseTimings timings;
  Method method = Method::kClassical;
  int nx = 0;
  int nx_controllable = 0;
  int nu = 0;
  int horizon = 0;
  std::vector<int> mu;  // empty for the classical method
  /// name() of the provider that served A'PA in the recursion.
  std::string quadratics_provider;
  std::size_t quadratics_calls = 0;
  std::vector<std::string> warnings;
};

/// Uncontrollable states beyond this magnitude trigger a warning.
inline constexpr double kUncontrollableWarnLevel = 1e12;

/// classical: backward/forward Riccati with dense (A, B).
/// brunovsky: staircase decomposition, Brunovsky transform, stage-parallel
/// cost transformation, copy-kernel Riccati, stage-parallel recovery.
/// Failures are rethrown as SolveError naming the phase.
SolveReport Solve(const LqOcpProblem& problem, const SolveOptions& options);

}  // namespace briccati
