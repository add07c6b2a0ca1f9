#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "briccati/brunovsky.hpp"
#include "briccati/kkt_oracle.hpp"
#include "briccati/problem_io.hpp"
#include "briccati/solver.hpp"
#include "briccati/staircase.hpp"

namespace py = pybind11;
using namespace briccati;

namespace {

Method MethodArg(const std::string& name) { return ParseMethod(name); }

}  // namespace

PYBIND11_MODULE(_briccati, m) {
  m.doc() = "Riccati solvers for LQ optimal control";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<StructureError>(m, "StructureError", error.ptr());
  py::register_exception<SolveError>(m, "SolveError", error.ptr());

  py::class_<StageData>(m, "Stage")
      .def(py::init<>())
      .def_readwrite("Q", &StageData::Q)
      .def_readwrite("R", &StageData::R)
      .def_readwrite("S", &StageData::S)
      .def_readwrite("q", &StageData::q)
      .def_readwrite("r", &StageData::r)
      .def_readwrite("b", &StageData::b);

  py::class_<TerminalData>(m, "Terminal")
      .def(py::init<>())
      .def_readwrite("Q", &TerminalData::Q)
      .def_readwrite("q", &TerminalData::q);

  py::class_<LqOcpProblem>(m, "Problem")
      .def(py::init<>())
      .def_readwrite("nx", &LqOcpProblem::nx)
      .def_readwrite("nu", &LqOcpProblem::nu)
      .def_readwrite("horizon", &LqOcpProblem::horizon)
      .def_readwrite("A", &LqOcpProblem::A)
      .def_readwrite("B", &LqOcpProblem::B)
      .def_readwrite("x0", &LqOcpProblem::x0)
      // Lists are copied in and out; assign the whole list back after edits.
      .def_readwrite("stages", &LqOcpProblem::stages)
      .def_readwrite("terminal", &LqOcpProblem::terminal);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("states", &Trajectory::states)
      .def_readonly("inputs", &Trajectory::inputs)
      .def_property_readonly("horizon", &Trajectory::horizon);

  py::class_<PhaseTimings>(m, "PhaseTimings")
      .def_readonly("decompose", &PhaseTimings::decompose)
      .def_readonly("transform", &PhaseTimings::transform)
      .def_readonly("riccati", &PhaseTimings::riccati)
      .def_readonly("recover", &PhaseTimings::recover)
      .def_property_readonly("total", &PhaseTimings::total);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("trajectory", &SolveReport::trajectory)
      .def_readonly("timings", &SolveReport::timings)
      .def_property_readonly(
          "method", [](const SolveReport& r) { return std::string(ToString(r.method)); })
      .def_readonly("nx_controllable", &SolveReport::nx_controllable)
      .def_readonly("mu", &SolveReport::mu)
      .def_readonly("warnings", &SolveReport::warnings);

  py::class_<KalmanDecomposition>(m, "KalmanDecomposition")
      .def_readonly("T", &KalmanDecomposition::T)
      .def_readonly("A_co", &KalmanDecomposition::A_co)
      .def_readonly("A_12", &KalmanDecomposition::A_12)
      .def_readonly("A_uc", &KalmanDecomposition::A_uc)
      .def_readonly("B_co", &KalmanDecomposition::B_co)
      .def_readonly("n_controllable", &KalmanDecomposition::n_controllable);

  py::class_<BrunovskyTransform>(m, "BrunovskyTransform")
      .def_readonly("mu", &BrunovskyTransform::mu)
      .def_readonly("T", &BrunovskyTransform::T)
      .def_readonly("T_inv", &BrunovskyTransform::T_inv)
      .def_readonly("F", &BrunovskyTransform::F)
      .def_readonly("G", &BrunovskyTransform::G)
      .def_readonly("G_inv", &BrunovskyTransform::G_inv);

  m.def(
      "random_problem",
      [](int nx, int nu, int horizon, std::uint64_t seed, bool dense,
         int controllable_dim) {
        RandomProblemOptions o;
        o.dense_stage_terms = dense;
        o.controllable_dim = controllable_dim;
        return RandomProblem(nx, nu, horizon, seed, o);
      },
      py::arg("nx"), py::arg("nu"), py::arg("horizon"), py::arg("seed") = 0,
      py::arg("dense_stage_terms") = false, py::arg("controllable_dim") = -1);

  m.def(
      "validate", [](const LqOcpProblem& p) { return Validate(p).issues; },
      "List of problems found; empty when the instance is valid.");

  m.def(
      "solve",
      [](const LqOcpProblem& p, const std::string& method, int threads,
         double rank_tol) {
        SolveOptions o;
        o.method = MethodArg(method);
        o.thread_budget = threads;
        o.rank_tol = rank_tol;
        py::gil_scoped_release release;
        return Solve(p, o);
      },
      py::arg("problem"), py::arg("method") = "brunovsky",
      py::arg("threads") = 1, py::arg("rank_tol") = kDefaultRankTol);

  m.def(
      "solve_kkt",
      [](const LqOcpProblem& p) {
        py::gil_scoped_release release;
        return SolveKkt(p);
      },
      "Dense KKT reference solve; small problems only.");

  m.def("objective", &Objective);
  m.def(
      "relative_difference",
      [](const Trajectory& a, const Trajectory& b) {
        return RelativeDifference(a, b).max();
      });

  m.def("staircase", &StaircaseDecompose, py::arg("A"), py::arg("B"),
        py::arg("rank_tol") = kDefaultRankTol);
  m.def("brunovsky_transform", &ComputeBrunovskyTransform, py::arg("A"),
        py::arg("B"), py::arg("rank_tol") = kDefaultRankTol);

  m.def("problem_from_json", &ProblemFromJson);
  m.def("problem_to_json", &ProblemToJson);
  m.def("load_problem", &LoadProblem);
  m.def("save_problem", &SaveProblem);
}
