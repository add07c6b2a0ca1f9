#include "briccati/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace briccati {
namespace {

struct Accumulator {
  std::vector<double> totals;
  PhaseTimings phases;
  double max_rel_err = std::numeric_limits<double>::quiet_NaN();

  void Add(double seconds, const PhaseTimings& t) {
    totals.push_back(seconds);
    phases.decompose += t.decompose;
    phases.transform += t.transform;
    phases.riccati += t.riccati;
    phases.recover += t.recover;
  }
};

BenchRow Summarize(Method method, const LqOcpProblem& shape, int reps,
                   const Accumulator& acc) {
  BenchRow row;
  row.method = method;
  row.nx = shape.nx;
  row.nu = shape.nu;
  row.horizon = shape.horizon;
  row.reps = reps;
  row.max_rel_err = acc.max_rel_err;
  const double count = static_cast<double>(acc.totals.size());
  if (acc.totals.empty()) return row;
  double sum = 0.0;
  for (double t : acc.totals) sum += t;
  row.mean_s = sum / count;
  row.min_s = *std::min_element(acc.totals.begin(), acc.totals.end());
  double ss = 0.0;
  for (double t : acc.totals) ss += (t - row.mean_s) * (t - row.mean_s);
  row.std_s = acc.totals.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  row.t_decompose_s = acc.phases.decompose / count;
  row.t_transform_s = acc.phases.transform / count;
  row.t_riccati_s = acc.phases.riccati / count;
  row.t_recover_s = acc.phases.recover / count;
  return row;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string FormatDouble(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(9);
  os << x;
  return os.str();
}

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int ParseInt(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw Error("not an integer: \"" + s + "\"");
  }
  if (used != s.size()) throw Error("not an integer: \"" + s + "\"");
  return v;
}

/// One cell: every method on the same `reps` problems.
std::vector<BenchRow> RunCell(const BenchConfig& cfg, int nx) {
  const bool fixed = cfg.fixed_problem.has_value();
  auto make_problem = [&](int rep) {
    return fixed ? *cfg.fixed_problem
                 : RandomProblem(nx, cfg.nu, cfg.horizon,
                                 CellSeed(cfg.seed, nx, rep));
  };

  std::vector<Accumulator> acc(cfg.methods.size());
  std::string error;
  LqOcpProblem shape;
  try {
    LqOcpProblem problem = make_problem(0);
    shape = problem;
    for (Method method : cfg.methods) {
      SolveOptions opts;
      opts.method = method;
      opts.thread_budget = cfg.thread_budget;
      Solve(problem, opts);  // warm-up
    }
    double worst = cfg.methods.size() > 1
                       ? 0.0
                       : std::numeric_limits<double>::quiet_NaN();
    for (int rep = 0; rep < cfg.reps; ++rep) {
      if (rep > 0 && !fixed) problem = make_problem(rep);
      std::vector<Trajectory> results;
      for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
        SolveOptions opts;
        opts.method = cfg.methods[i];
        opts.thread_budget = cfg.thread_budget;
        const auto t0 = std::chrono::steady_clock::now();
        SolveReport report = Solve(problem, opts);
        const auto t1 = std::chrono::steady_clock::now();
        acc[i].Add(std::chrono::duration<double>(t1 - t0).count(),
                   report.timings);
        results.push_back(std::move(report.trajectory));
      }
      for (std::size_t i = 1; i < results.size(); ++i) {
        worst = std::max(worst, RelativeDifference(results[i], results[0]).max());
      }
    }
    for (auto& a : acc) a.max_rel_err = worst;
    if (!(std::isnan(worst) || worst <= cfg.agreement_tol)) {
      std::ostringstream os;
      os << "methods disagree: max relative difference " << worst
         << " exceeds " << cfg.agreement_tol;
      error = os.str();
    }
  } catch (const std::exception& e) {
    error = e.what();
  }
  if (shape.nx == 0) {
    shape.nx = nx;
    shape.nu = cfg.nu;
    shape.horizon = cfg.horizon;
  }

  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    BenchRow row = Summarize(cfg.methods[i], shape, cfg.reps, acc[i]);
    row.error = error;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void ValidateConfig(const BenchConfig& cfg) {
  if (cfg.reps < 1) throw Error("reps must be >= 1");
  if (cfg.thread_budget < 1) throw Error("thread budget must be >= 1");
  if (cfg.methods.empty()) throw Error("at least one method is required");
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.methods[i] == cfg.methods[j]) throw Error("duplicate method");
    }
  }
  if (!(cfg.agreement_tol > 0.0)) throw Error("agreement_tol must be positive");
  if (cfg.fixed_problem) {
    RequireValid(*cfg.fixed_problem);
    return;
  }
  if (cfg.nu < 1) throw Error("nu must be >= 1");
  if (cfg.horizon < 1) throw Error("horizon must be >= 1");
  if (cfg.nx_list.empty()) throw Error("nx list is empty");
  for (int nx : cfg.nx_list) {
    if (nx < cfg.nu) {
      throw Error("nx list entry " + std::to_string(nx) + " is below nu = " +
                  std::to_string(cfg.nu));
    }
  }
}

std::uint64_t CellSeed(std::uint64_t seed, int nx, int rep) {
  // splitmix64 over (seed, nx, rep)
  std::uint64_t z = seed;
  z ^= static_cast<std::uint64_t>(nx) * 0x9E3779B97F4A7C15ULL;
  z ^= static_cast<std::uint64_t>(rep) * 0xC2B2AE3D27D4EB4FULL + 0x165667B19E3779F9ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<BenchRow> RunBenchmark(const BenchConfig& cfg) {
  ValidateConfig(cfg);
  std::vector<BenchRow> rows;
  if (cfg.fixed_problem) {
    auto cell = RunCell(cfg, cfg.fixed_problem->nx);
    rows.insert(rows.end(), cell.begin(), cell.end());
    return rows;
  }
  for (int nx : cfg.nx_list) {
    auto cell = RunCell(cfg, nx);
    rows.insert(rows.end(), cell.begin(), cell.end());
  }
  return rows;
}

void WriteCsv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << kBenchCsvHeader << '\n';
  for (const BenchRow& r : rows) {
    out << ToString(r.method) << ',' << r.nx << ',' << r.nu << ','
        << r.horizon << ',' << r.reps << ',' << FormatDouble(r.mean_s) << ','
        << FormatDouble(r.min_s) << ',' << FormatDouble(r.std_s) << ','
        << FormatDouble(r.t_decompose_s) << ','
        << FormatDouble(r.t_transform_s) << ','
        << FormatDouble(r.t_riccati_s) << ','
        << FormatDouble(r.t_recover_s) << ','
        << FormatDouble(r.max_rel_err) << ',' << CsvField(r.error) << '\n';
  }
}

void WriteCsv(const std::vector<BenchRow>& rows,
              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  WriteCsv(rows, out);
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<int> ParseIntList(const std::string& text) {
  std::vector<int> values;
  for (const auto& part : Split(text, ',')) {
    if (part.empty()) throw Error("empty entry in list \"" + text + "\"");
    values.push_back(ParseInt(part));
  }
  if (values.empty()) throw Error("empty list");
  return values;
}

std::vector<int> ParseIntRange(const std::string& text) {
  const auto parts = Split(text, ':');
  if (parts.size() != 3) {
    throw Error("range must look like start:stop:step, got \"" + text + "\"");
  }
  const int start = ParseInt(parts[0]);
  const int stop = ParseInt(parts[1]);
  const int step = ParseInt(parts[2]);
  if (step <= 0) throw Error("range step must be positive");
  if (stop < start) throw Error("range stop is below start");
  std::vector<int> values;
  for (int v = start; v <= stop; v += step) values.push_back(v);
  return values;
}

std::vector<Method> ParseMethodList(const std::string& text) {
  std::vector<Method> methods;
  for (const auto& part : Split(text, ',')) methods.push_back(ParseMethod(part));
  if (methods.empty()) throw Error("empty method list");
  return methods;
}

}  // namespace briccati
