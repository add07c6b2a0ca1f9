#include "briccati/solver.hpp"

#include <chrono>
#include <sstream>

#include "briccati/brunovsky.hpp"
#include "briccati/riccati.hpp"
#include "briccati/staircase.hpp"
#include "briccati/transform.hpp"

namespace briccati {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

/// Runs fn, rethrowing any briccati::Error as SolveError(phase).
template <typename Fn>
auto InPhase(const char* phase, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SolveError&) {
    throw;
  } catch (const Error& e) {
    throw SolveError(phase, e.what());
  }
}

SolveReport SolveClassicalReport(const LqOcpProblem& problem) {
  SolveReport report;
  const auto t0 = Clock::now();
  const DenseQuadratics provider(problem.A, problem.B);
  report.trajectory = InPhase("riccati", [&] {
    const auto backward = BackwardPass(problem, provider);
    return ForwardPass(problem, provider, backward);
  });
  report.timings.riccati = Seconds(t0, Clock::now());
  report.nx_controllable = problem.nx;
  report.quadratics_provider = std::string(provider.name());
  report.quadratics_calls = provider.quadratics_calls();
  return report;
}

SolveReport SolveBrunovskyReport(const LqOcpProblem& problem,
                                 const SolveOptions& opts) {
  SolveReport report;
  const int threads = opts.thread_budget;

  auto t = Clock::now();
  KalmanDecomposition kd = InPhase(
      "decompose", [&] { return StaircaseDecompose(problem.A, problem.B,
                                                   opts.rank_tol); });
  BrunovskyTransform bt = InPhase("decompose", [&] {
    return ComputeBrunovskyTransform(kd.A_co, kd.B_co, opts.rank_tol);
  });
  auto now = Clock::now();
  report.timings.decompose = Seconds(t, now);
  t = now;

  const std::vector<Vector> x_uc = InPhase(
      "transform", [&] { return RolloutUncontrollable(problem, kd, threads); });
  double uc_peak = 0.0;
  for (const auto& x : x_uc) {
    if (x.size() > 0) uc_peak = std::max(uc_peak, x.lpNorm<Eigen::Infinity>());
  }
  if (!(uc_peak <= kUncontrollableWarnLevel)) {
    std::ostringstream os;
    os << "uncontrollable states reach " << uc_peak
       << "; recovered trajectory may have lost accuracy";
    report.warnings.push_back(os.str());
  }
  const BrunovskyOcp bocp = InPhase("transform", [&] {
    return BuildBrunovskyOcp(problem, kd, x_uc, bt, threads);
  });
  now = Clock::now();
  report.timings.transform = Seconds(t, now);
  t = now;

  const BrunovskyQuadratics provider(bt.mu);
  const Trajectory z = InPhase("riccati", [&] {
    const auto backward = BackwardPass(bocp.problem, provider);
    Trajectory out = ForwardPass(bocp.problem, provider, backward);
    out.coordinates = Coordinates::kBrunovsky;
    return out;
  });
  now = Clock::now();
  report.timings.riccati = Seconds(t, now);
  t = now;

  report.trajectory = InPhase(
      "recover", [&] { return RecoverSolution(z, bt, kd, x_uc, threads); });
  report.timings.recover = Seconds(t, Clock::now());

  report.nx_controllable = kd.n_controllable;
  report.mu = bt.mu;
  report.quadratics_provider = std::string(provider.name());
  report.quadratics_calls = provider.quadratics_calls();
  return report;
}

}  // namespace

std::string_view ToString(Method m) {
  return m == Method::kClassical ? "classical" : "brunovsky";
}

Method ParseMethod(std::string_view name) {
  if (name == "classical") return Method::kClassical;
  if (name == "brunovsky") return Method::kBrunovsky;
  throw Error("unknown method \"" + std::string(name) +
              "\" (expected classical or brunovsky)");
}

SolveReport Solve(const LqOcpProblem& problem, const SolveOptions& options) {
  if (options.thread_budget < 1) throw Error("thread_budget must be >= 1");
  InPhase("validate", [&] { RequireValid(problem); });

  SolveReport report = options.method == Method::kClassical
                           ? SolveClassicalReport(problem)
                           : SolveBrunovskyReport(problem, options);
  report.method = options.method;
  report.nx = problem.nx;
  report.nu = problem.nu;
  report.horizon = problem.horizon;
  report.trajectory.coordinates = Coordinates::kOriginal;
  if (!options.collect_timings) report.timings = PhaseTimings{};
  return report;
}

}  // namespace briccati
