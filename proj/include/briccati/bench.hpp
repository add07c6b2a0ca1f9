#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "briccati/lqocp.hpp"
#include "briccati/solver.hpp"

namespace briccati {

struct BenchConfig {
  std::vector<int> nx_list;
  int nu = 10;
  int horizon = 50;
  int reps = 100;
  std::uint64_t seed = 0;
  int thread_budget = 1;
  std::vector<Method> methods = {Method::kClassical, Method::kBrunovsky};
  /// When set, every cell solves this problem instead of random ones and
  /// nx_list/nu/horizon are taken from it.
  std::optional<LqOcpProblem> fixed_problem;
  /// Relative trajectory agreement required between methods.
  double agreement_tol = 1e-6;
};

/// Throws briccati::Error describing the first violated invariant.
void ValidateConfig(const BenchConfig& cfg);

struct BenchRow {
  Method method = Method::kClassical;
  int nx = 0;
  int nu = 0;
  int horizon = 0;
  int reps = 0;
  double mean_s = 0.0;
  double min_s = 0.0;
  double std_s = 0.0;
  // Mean phase times.
  double t_decompose_s = 0.0;
  double t_transform_s = 0.0;
  double t_riccati_s = 0.0;
  double t_recover_s = 0.0;
  /// Max relative difference to the other method over all reps; NaN when
  /// only one method ran.
  double max_rel_err = 0.0;
  std::string error;  // empty on success
};

/// Seed of repetition `rep` in the cell for state size `nx`.
std::uint64_t CellSeed(std::uint64_t seed, int nx, int rep);

/// Cells run serially. Each cell does one untimed warm-up solve per method,
/// then `reps` timed solves per method on the same problem set.
std::vector<BenchRow> RunBenchmark(const BenchConfig& cfg);

inline constexpr const char* kBenchCsvHeader =
    "method,nx,nu,N,reps,mean_s,min_s,std_s,t_decompose_s,t_transform_s,"
    "t_riccati_s,t_recover_s,max_rel_err,error";

void WriteCsv(const std::vector<BenchRow>& rows, std::ostream& out);
void WriteCsv(const std::vector<BenchRow>& rows,
              const std::filesystem::path& path);

/// "10,20,30" -> {10, 20, 30}
std::vector<int> ParseIntList(const std::string& text);
/// "10:200:10" -> {10, 20, ..., 200}
std::vector<int> ParseIntRange(const std::string& text);
std::vector<Method> ParseMethodList(const std::string& text);

}  // namespace briccati
