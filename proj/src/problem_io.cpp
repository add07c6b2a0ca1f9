#include "briccati/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace briccati {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "lqocp-1";

// ---------------------------------------------------------------- reading

const json& Field(const json& obj, const std::string& key,
                  const std::string& where) {
  if (!obj.is_object()) {
    throw SchemaError(where.empty() ? "document must be an object"
                                    : where + " must be an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError("missing field \"" + where + key + "\"");
  }
  return *it;
}

int ReadInt(const json& obj, const std::string& key) {
  const json& v = Field(obj, key, "");
  if (!v.is_number_integer()) {
    throw SchemaError("field \"" + key + "\" must be an integer");
  }
  return v.get<int>();
}

std::vector<double> ReadNumbers(const json& v, const std::string& name,
                                std::size_t expected) {
  if (!v.is_array()) {
    throw SchemaError("field \"" + name + "\" must be an array of numbers");
  }
  if (v.size() != expected) {
    throw SchemaError("field \"" + name + "\" has " +
                      std::to_string(v.size()) + " entries, expected " +
                      std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& e : v) {
    if (!e.is_number()) {
      throw SchemaError("field \"" + name + "\" must contain only numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

Matrix ReadMatrix(const json& obj, const std::string& key, int rows, int cols,
                  const std::string& where = "") {
  const auto flat = ReadNumbers(Field(obj, key, where), where + key,
                                static_cast<std::size_t>(rows) * cols);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = flat[i * cols + j];
  return m;
}

Vector ReadVector(const json& obj, const std::string& key, int size,
                  const std::string& where = "") {
  const auto flat = ReadNumbers(Field(obj, key, where), where + key, size);
  return Eigen::Map<const Vector>(flat.data(), size);
}

// ---------------------------------------------------------------- writing

void AppendNumber(std::string* out, double x) {
  if (!std::isfinite(x)) {
    throw Error("cannot serialize non-finite value to JSON");
  }
  if (x == 0.0 && std::signbit(x)) {
    // "-0" would parse back as the integer 0.
    out->append("-0.0");
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out->append(buf);
}

void AppendMatrix(std::string* out, const Matrix& m) {
  out->push_back('[');
  bool first = true;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!first) out->push_back(',');
      first = false;
      AppendNumber(out, m(i, j));
    }
  }
  out->push_back(']');
}

void AppendKey(std::string* out, const char* key) {
  out->push_back('"');
  out->append(key);
  out->append("\":");
}

}  // namespace

LqOcpProblem ProblemFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("document must be a JSON object");

  const json& version = Field(doc, "version", "");
  if (!version.is_string() || version.get<std::string>() != kVersion) {
    throw SchemaError(std::string("field \"version\" must be \"") + kVersion +
                      "\"");
  }
  LqOcpProblem p;
  p.nx = ReadInt(doc, "nx");
  p.nu = ReadInt(doc, "nu");
  p.horizon = ReadInt(doc, "N");
  if (p.nx < 1) throw SchemaError("nx must be ≥ 1");
  if (p.nu < 1) throw SchemaError("nu must be ≥ 1");
  if (p.horizon < 1) throw SchemaError("N must be ≥ 1");
  const int nx = p.nx;
  const int nu = p.nu;

  p.A = ReadMatrix(doc, "A", nx, nx);
  p.B = ReadMatrix(doc, "B", nx, nu);

  const json& stages = Field(doc, "stages", "");
  if (!stages.is_array() ||
      stages.size() != static_cast<std::size_t>(p.horizon)) {
    throw SchemaError("field \"stages\" must be an array of N objects");
  }
  p.stages.reserve(p.horizon);
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const std::string where = "stages[" + std::to_string(k) + "].";
    const json& s = stages[k];
    StageData st;
    st.Q = ReadMatrix(s, "Q", nx, nx, where);
    st.R = ReadMatrix(s, "R", nu, nu, where);
    st.S = ReadMatrix(s, "S", nu, nx, where);
    st.q = ReadVector(s, "q", nx, where);
    st.r = ReadVector(s, "r", nu, where);
    st.b = ReadVector(s, "b", nx, where);
    p.stages.push_back(std::move(st));
  }
  const json& terminal = Field(doc, "terminal", "");
  p.terminal.Q = ReadMatrix(terminal, "Q", nx, nx, "terminal.");
  p.terminal.q = ReadVector(terminal, "q", nx, "terminal.");
  p.x0 = ReadVector(doc, "x0", nx);

  if (auto it = doc.find("ineq"); it != doc.end() && !it->is_null()) {
    const json& d_field = Field(*it, "d", "ineq.");
    if (!d_field.is_array()) {
      throw SchemaError("field \"ineq.d\" must be an array of numbers");
    }
    const int ni = static_cast<int>(d_field.size());
    InequalityData ineq;
    ineq.d = ReadVector(*it, "d", ni, "ineq.");
    ineq.C = ReadMatrix(*it, "C", ni, nx, "ineq.");
    ineq.D = ReadMatrix(*it, "D", ni, nu, "ineq.");
    p.ineq = std::move(ineq);
  }
  return p;
}

std::string ProblemToJson(const LqOcpProblem& p) {
  std::string out;
  out.reserve(64 + 24 * static_cast<std::size_t>(p.horizon + 2) *
                       (p.nx + p.nu) * (p.nx + p.nu + 3));
  out.append("{\n");
  out.append("\"version\":\"").append(kVersion).append("\",\n");
  out.append("\"nx\":").append(std::to_string(p.nx)).append(",\n");
  out.append("\"nu\":").append(std::to_string(p.nu)).append(",\n");
  out.append("\"N\":").append(std::to_string(p.horizon)).append(",\n");
  AppendKey(&out, "A");
  AppendMatrix(&out, p.A);
  out.append(",\n");
  AppendKey(&out, "B");
  AppendMatrix(&out, p.B);
  out.append(",\n\"stages\":[\n");
  for (std::size_t k = 0; k < p.stages.size(); ++k) {
    const auto& s = p.stages[k];
    out.push_back('{');
    AppendKey(&out, "Q");
    AppendMatrix(&out, s.Q);
    out.push_back(',');
    AppendKey(&out, "R");
    AppendMatrix(&out, s.R);
    out.push_back(',');
    AppendKey(&out, "S");
    AppendMatrix(&out, s.S);
    out.push_back(',');
    AppendKey(&out, "q");
    AppendMatrix(&out, s.q);
    out.push_back(',');
    AppendKey(&out, "r");
    AppendMatrix(&out, s.r);
    out.push_back(',');
    AppendKey(&out, "b");
    AppendMatrix(&out, s.b);
    out.push_back('}');
    if (k + 1 < p.stages.size()) out.push_back(',');
    out.push_back('\n');
  }
  out.append("],\n\"terminal\":{");
  AppendKey(&out, "Q");
  AppendMatrix(&out, p.terminal.Q);
  out.push_back(',');
  AppendKey(&out, "q");
  AppendMatrix(&out, p.terminal.q);
  out.append("},\n");
  AppendKey(&out, "x0");
  AppendMatrix(&out, p.x0);
  if (p.ineq) {
    out.append(",\n\"ineq\":{");
    AppendKey(&out, "C");
    AppendMatrix(&out, p.ineq->C);
    out.push_back(',');
    AppendKey(&out, "D");
    AppendMatrix(&out, p.ineq->D);
    out.push_back(',');
    AppendKey(&out, "d");
    AppendMatrix(&out, p.ineq->d);
    out.push_back('}');
  }
  out.append("\n}\n");
  return out;
}

LqOcpProblem LoadProblem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open problem file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ProblemFromJson(buffer.str());
}

void SaveProblem(const LqOcpProblem& problem,
                 const std::filesystem::path& path) {
  const std::string text = ProblemToJson(problem);
  std::ofstream out(path);
  if (!out) throw Error("cannot write problem file " + path.string());
  out << text;
  if (!out) throw Error("failed writing problem file " + path.string());
}

}  // namespace briccati
