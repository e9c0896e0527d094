#pragma once

#include <string>

#include "json.hpp"
#include "nsmorse/problem.hpp"

namespace nsmorse {

inline constexpr int kProblemSchemaVersion = 1;

/// Parses a problem document (see README for the schema). Structural problems
/// raise Error(Validation); the result is not yet checked by validate().
ProblemSpec problem_from_json(const nlohmann::json& doc);
nlohmann::json problem_to_json(const ProblemSpec& spec);

ProblemSpec load_problem(const std::string& path);

/// Matrix from a nested row-major array, a flat array of rows·cols entries,
/// or a scalar when the expected shape is 1×1.
RMatrix matrix_from_json(const nlohmann::json& value, int rows, int cols, const std::string& where);
nlohmann::json matrix_to_json(const RMatrix& m);

}  // namespace nsmorse
