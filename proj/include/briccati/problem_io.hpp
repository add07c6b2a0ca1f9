#pragma once

#include <filesystem>
#include <string>

#include "briccati/lqocp.hpp"

namespace briccati {

/// JSON problem files, schema "lqocp-1". Matrices are row-major flat arrays
/// and every number is written with 17 significant digits, so a
/// save/load round trip is bit-exact for finite values.
LqOcpProblem ProblemFromJson(const std::string& text);
std::string ProblemToJson(const LqOcpProblem& problem);

LqOcpProblem LoadProblem(const std::filesystem::path& path);
void SaveProblem(const LqOcpProblem& problem,
                 const std::filesystem::path& path);

}  // namespace briccati
