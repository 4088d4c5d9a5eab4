#pragma once

#include <string>

#include <json.hpp>

#include "privopt/problem.hpp"

namespace privopt {

using Json = nlohmann::json;

Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Matrix matrix_from_json(const Json& j);
Vector vector_from_json(const Json& j);  // null entries become -infinity

// {"objective": {"kind": "linear"|"quadratic", "sense", "c", "Q"?},
//  "A": [[...]], "b": [...], "nonneg": [...]}
Json problem_to_json(const ConstrainedProblem& p);
ConstrainedProblem problem_from_json(const Json& j);

// {"delta_sens": x, "floors": [...], "private_rows": [...]?}
Json sensitivity_to_json(const SensitivityModel& s);
SensitivityModel sensitivity_from_json(const Json& j);

Json solution_to_json(const Solution& s);
Json private_solution_to_json(const PrivateSolution& s);

Json load_json_file(const std::string& path);

}  // namespace privopt
