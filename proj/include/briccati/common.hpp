#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace briccati {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Default relative singular-value threshold for rank decisions.
inline constexpr double kDefaultRankTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed problem file (syntax).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed JSON that does not match the problem schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Random instance generation gave up.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Cholesky of R_e failed at a given stage of the backward pass.
class FactorizationError : public Error {
 public:
  FactorizationError(int stage, const std::string& what)
      : Error(what), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

/// The controllable pair cannot be brought to the requested normal form
/// (redundant inputs, pattern violations, singular selection matrices).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Singular KKT matrix in the dense oracle.
class DegenerateKktError : public Error {
 public:
  using Error::Error;
};

/// A solver failure tagged with the pipeline phase it came from.
class SolveError : public Error {
 public:
  SolveError(std::string phase, const std::string& what)
      : Error(phase + ": " + what), phase_(std::move(phase)) {}
  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

}  // namespace briccati
