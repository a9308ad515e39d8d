#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "support/generators.hpp"
#include "whidx/report_io.hpp"

using namespace whidx;
using whidx::testing::distance;

namespace {

std::string parse_message(const std::string& text) {
    try {
        matrix_problem_from_json(parse_json_text(text, "doc.json"));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        return e.what();
    }
    FAIL("no parse error");
    return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("complex entries and matrices") {
    CHECK(complex_from_json(Json::parse("[1.5, -2]"), "x") == Complex(1.5, -2.0));
    CHECK(complex_from_json(Json::parse("3"), "x") == Complex(3.0, 0.0));
    CHECK_THROWS_AS(complex_from_json(Json::parse("[1, 2, 3]"), "x"), Error);

    const ComplexMatrix M = random_unitary(3, 2);
    CHECK(distance(matrix_from_json(matrix_to_json(M), "M"), M) == 0.0);
    const ComplexMatrix empty = matrix_from_json(Json::array(), "B", 4);
    CHECK(empty.rows() == 0);
    CHECK(empty.cols() == 4);
}

TEST_CASE("realizations round-trip") {
    const Realization r = random_realization(3, 2, 5);
    const Realization back = realization_from_json(realization_to_json(r), "V");
    CHECK(distance(back.systems_operator(), r.systems_operator()) == 0.0);

    const Realization c = constant_realization(random_unitary(2, 3));
    const Realization cb = realization_from_json(realization_to_json(c), "W");
    CHECK(cb.state_dim() == 0);
    CHECK(cb.B.rows() == 0);
    CHECK(cb.B.cols() == 2);
    CHECK(cb.C.rows() == 2);
    CHECK(cb.C.cols() == 0);
    CHECK(distance(cb.D, c.D) == 0.0);

    const MatrixProblem p = testing::worked_example();
    const std::string text = dump_json(problem_to_json(p));
    CHECK(dump_json(problem_to_json(matrix_problem_from_json(parse_json_text(text)))) == text);
}

TEST_CASE("reports round-trip byte for byte") {
    const MatrixProblem p = testing::worked_example();
    IndexReport r = full_report(p.V, p.W);
    r.diagnostics.warnings.push_back("a warning");
    r.diagnostics.stein_conditioning = std::numeric_limits<double>::infinity();
    const std::string first = dump_json(report_to_json(r));
    const IndexReport back = report_from_json(parse_json_text(first));
    CHECK(back.all_indices() == r.all_indices());
    CHECK(back.kernel_dims == r.kernel_dims);
    CHECK(std::isinf(back.diagnostics.stein_conditioning));
    CHECK(dump_json(report_to_json(back)) == first);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const testing::PairCase pc = testing::random_pair(seed, 6, 3);
        const std::string text = dump_json(report_to_json(full_report(pc.V, pc.W)));
        CHECK(dump_json(report_to_json(report_from_json(parse_json_text(text)))) == text);
    }
}

TEST_CASE("scalar problems") {
    const Json doc = parse_json_text(R"({"phi": {"zeros": [[0, 0], [0, 0]]}, "m": {"zeta": [0, 1], "zeros": [[0.5, 0]]}})");
    CHECK(is_scalar_problem(doc));
    const ScalarProblem s = scalar_problem_from_json(doc);
    CHECK(s.phi.degree() == 2);
    CHECK(s.phi.zeta == Complex(1.0, 0.0));
    CHECK(s.m.zeta == Complex(0.0, 1.0));
    CHECK(s.m.zeros.front() == Complex(0.5, 0.0));
    const std::string text = dump_json(blaschke_to_json(s.m));
    CHECK(dump_json(blaschke_to_json(blaschke_from_json(parse_json_text(text), "m"))) == text);
    CHECK_FALSE(is_scalar_problem(parse_json_text(R"({"V": {}, "W": {}})")));
}

TEST_CASE("parse errors carry position and field") {
    const std::string syntax = parse_message("{\n  \"V\": [1, 2\n}");
    CHECK(contains(syntax, "doc.json"));
    CHECK(contains(syntax, "line 3"));

    CHECK(contains(parse_message(R"({"V": {"A": [], "B": [], "C": [], "D": [[[1, 0]]]}})"), "missing key \"W\""));
    const std::string row = parse_message(
        R"({"V": {"A": [[[0,0],[0,0]], [[0,0]]], "B": [], "C": [], "D": [[[1,0]]]}, "W": {}})");
    CHECK(contains(row, "V.A[1]"));
    const std::string entry = parse_message(
        R"({"V": {"A": [], "B": [], "C": [], "D": [["x"]]}, "W": {"A": [], "B": [], "C": [], "D": [[[1,0]]]}})");
    CHECK(contains(entry, "V.D[0][0]"));
    const std::string shape = parse_message(
        R"({"V": {"A": [[[0,0]]], "B": [[[1,0],[0,0]]], "C": [[[1,0]]], "D": [[[0,0]]]}, "W": {"A": [], "B": [], "C": [], "D": [[[1,0]]]}})");
    CHECK(contains(shape, "V"));
    const std::string size = parse_message(
        R"({"V": {"A": [], "B": [], "C": [], "D": [[[1,0]]]}, "W": {"A": [], "B": [], "C": [], "D": [[[1,0],[0,0]],[[0,0],[1,0]]]}})");
    CHECK(contains(size, "1x1"));
}
