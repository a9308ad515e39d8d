#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "whidx/blaschke.hpp"
#include "whidx/whindex.hpp"

namespace whidx {

using Json = nlohmann::ordered_json;

/// Matrix problem: R = V W^*.
struct MatrixProblem {
    Realization V;
    Realization W;
};

/// Scalar problem: R = phi conj(m) on the circle.
struct ScalarProblem {
    BlaschkeProduct phi;
    BlaschkeProduct m;
};

/// Parses text as JSON; Parse errors carry the line and column.
Json parse_json_text(std::string_view text, std::string_view source_name = "input");

/// Complex entries are [re, im] pairs (a bare number is read as real).
Complex complex_from_json(const Json& j, const std::string& field);
Json complex_to_json(Complex z);

/// Rows of [re, im] entries; `cols_if_empty` fixes the column count of a 0-row matrix.
ComplexMatrix matrix_from_json(const Json& j, const std::string& field, Eigen::Index cols_if_empty = 0);
Json matrix_to_json(const ComplexMatrix& M);

/// {"A": ..., "B": ..., "C": ..., "D": ...}; dimensions are checked.
Realization realization_from_json(const Json& j, const std::string& field);
Json realization_to_json(const Realization& r);

/// {"zeta": [re, im], "zeros": [[re, im], ...]}; zeta defaults to 1.
BlaschkeProduct blaschke_from_json(const Json& j, const std::string& field);
Json blaschke_to_json(const BlaschkeProduct& b);

bool is_scalar_problem(const Json& j);
MatrixProblem matrix_problem_from_json(const Json& j);
ScalarProblem scalar_problem_from_json(const Json& j);
Json problem_to_json(const MatrixProblem& p);

Json report_to_json(const IndexReport& r);
IndexReport report_from_json(const Json& j);

/// Two-space indented dump followed by a newline.
std::string dump_json(const Json& j);

}  // namespace whidx
