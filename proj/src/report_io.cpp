#include "whidx/report_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace whidx {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::Parse, field + ": " + what);
}

const Json& require(const Json& j, const char* key, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(field, std::string("missing key \"") + key + "\"");
    return *it;
}

Json real_to_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double real_from_json(const Json& j, const std::string& field) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

template <typename T>
std::vector<T> list_from_json(const Json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) fail(field + "[" + std::to_string(i) + "]", "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (j[i].get<long long>() < 0) fail(field + "[" + std::to_string(i) + "]", "expected a nonnegative integer");
        }
        out.push_back(j[i].get<T>());
    }
    return out;
}

Json gaps_to_json(const std::vector<std::optional<double>>& gaps) {
    Json out = Json::array();
    for (const auto& g : gaps) out.push_back(g ? real_to_json(*g) : Json(nullptr));
    return out;
}

std::vector<std::optional<double>> gaps_from_json(const Json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array");
    std::vector<std::optional<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i].is_null()) {
            out.emplace_back(std::nullopt);
        } else {
            out.emplace_back(real_from_json(j[i], field + "[" + std::to_string(i) + "]"));
        }
    }
    return out;
}

}  // namespace

Json parse_json_text(std::string_view text, std::string_view source_name) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::ostringstream msg;
        msg << source_name << ": " << e.what();
        throw Error(ErrorKind::Parse, msg.str());
    }
}

Complex complex_from_json(const Json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(field, "expected [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

ComplexMatrix matrix_from_json(const Json& j, const std::string& field, Eigen::Index cols_if_empty) {
    if (!j.is_array()) fail(field, "expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return ComplexMatrix(0, cols_if_empty);
    if (!j[0].is_array()) fail(field + "[0]", "expected a row array");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    ComplexMatrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        const std::string rf = field + "[" + std::to_string(i) + "]";
        if (!row.is_array()) fail(rf, "expected a row array");
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            fail(rf, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            M(i, c) = complex_from_json(row[static_cast<std::size_t>(c)], rf + "[" + std::to_string(c) + "]");
        }
    }
    return M;
}

Json matrix_to_json(const ComplexMatrix& M) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(complex_to_json(M(i, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Realization realization_from_json(const Json& j, const std::string& field) {
    Realization r;
    r.D = matrix_from_json(require(j, "D", field), field + ".D");
    const Eigen::Index m = r.D.rows();
    r.A = matrix_from_json(require(j, "A", field), field + ".A");
    const Eigen::Index n = r.A.rows();
    r.B = matrix_from_json(require(j, "B", field), field + ".B", m);
    r.C = matrix_from_json(require(j, "C", field), field + ".C", n);
    // With no state, [] stands for the m x 0 output map as well as [[], ...].
    if (n == 0) {
        r.A.resize(0, 0);
        if (r.C.size() == 0) r.C.resize(m, 0);
    }
    try {
        r.check_dimensions();
    } catch (const Error& e) {
        fail(field, e.what());
    }
    return r;
}

Json realization_to_json(const Realization& r) {
    Json j = Json::object();
    j["A"] = matrix_to_json(r.A);
    j["B"] = matrix_to_json(r.B);
    j["C"] = matrix_to_json(r.C);
    j["D"] = matrix_to_json(r.D);
    return j;
}

BlaschkeProduct blaschke_from_json(const Json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    BlaschkeProduct b;
    if (const auto it = j.find("zeta"); it != j.end()) b.zeta = complex_from_json(*it, field + ".zeta");
    if (const auto it = j.find("zeros"); it != j.end()) {
        if (!it->is_array()) fail(field + ".zeros", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            b.zeros.push_back(complex_from_json((*it)[i], field + ".zeros[" + std::to_string(i) + "]"));
        }
    }
    return b;
}

Json blaschke_to_json(const BlaschkeProduct& b) {
    Json j = Json::object();
    j["zeta"] = complex_to_json(b.zeta);
    Json zeros = Json::array();
    for (const Complex a : b.zeros) zeros.push_back(complex_to_json(a));
    j["zeros"] = std::move(zeros);
    return j;
}

bool is_scalar_problem(const Json& j) { return j.is_object() && j.contains("phi"); }

MatrixProblem matrix_problem_from_json(const Json& j) {
    MatrixProblem p{realization_from_json(require(j, "V", "<root>"), "V"),
                    realization_from_json(require(j, "W", "<root>"), "W")};
    if (p.V.io_dim() != p.W.io_dim()) {
        fail("<root>", "V is " + std::to_string(p.V.io_dim()) + "x" + std::to_string(p.V.io_dim()) + " but W is " +
                           std::to_string(p.W.io_dim()) + "x" + std::to_string(p.W.io_dim()));
    }
    return p;
}

ScalarProblem scalar_problem_from_json(const Json& j) {
    return {blaschke_from_json(require(j, "phi", "<root>"), "phi"), blaschke_from_json(require(j, "m", "<root>"), "m")};
}

Json problem_to_json(const MatrixProblem& p) {
    Json j = Json::object();
    j["V"] = realization_to_json(p.V);
    j["W"] = realization_to_json(p.W);
    return j;
}

Json report_to_json(const IndexReport& r) {
    Json j = Json::object();
    j["m"] = r.m;
    j["negative_indices"] = r.negative_indices;
    j["zero_count"] = r.zero_count;
    j["positive_indices"] = r.positive_indices;
    j["kernel_dims"] = r.kernel_dims;
    j["cokernel_dims"] = r.cokernel_dims;
    j["mu"] = r.mu;
    j["nu"] = r.nu;
    j["n_TR"] = r.n_TR;
    j["d_TR"] = r.d_TR;
    j["fredholm_index"] = r.fredholm_index;
    j["index_sum"] = r.index_sum;
    j["state_dim_difference"] = r.state_dim_difference;
    const auto& d = r.diagnostics;
    Json dj = Json::object();
    dj["omega_residual"] = real_to_json(d.omega_residual);
    dj["q_residual"] = real_to_json(d.q_residual);
    dj["q_identity_residual"] = real_to_json(d.q_identity_residual);
    dj["omega_star_mismatch"] = real_to_json(d.omega_star_mismatch);
    dj["q_min_eigenvalue"] = real_to_json(d.q_min_eigenvalue);
    dj["q_max_eigenvalue"] = real_to_json(d.q_max_eigenvalue);
    dj["stein_conditioning"] = real_to_json(d.stein_conditioning);
    dj["kernel_gaps"] = gaps_to_json(d.kernel_gaps);
    dj["cokernel_gaps"] = gaps_to_json(d.cokernel_gaps);
    dj["warnings"] = d.warnings;
    j["diagnostics"] = std::move(dj);
    return j;
}

IndexReport report_from_json(const Json& j) {
    const std::string root = "report";
    auto field = [&](const char* key) { return root + "." + key; };
    IndexReport r;
    r.m = require(j, "m", root).get<std::size_t>();
    r.negative_indices = list_from_json<int>(require(j, "negative_indices", root), field("negative_indices"));
    r.zero_count = require(j, "zero_count", root).get<std::size_t>();
    r.positive_indices = list_from_json<int>(require(j, "positive_indices", root), field("positive_indices"));
    r.kernel_dims = list_from_json<std::size_t>(require(j, "kernel_dims", root), field("kernel_dims"));
    r.cokernel_dims = list_from_json<std::size_t>(require(j, "cokernel_dims", root), field("cokernel_dims"));
    r.mu = list_from_json<std::size_t>(require(j, "mu", root), field("mu"));
    r.nu = list_from_json<std::size_t>(require(j, "nu", root), field("nu"));
    r.n_TR = require(j, "n_TR", root).get<std::size_t>();
    r.d_TR = require(j, "d_TR", root).get<std::size_t>();
    r.fredholm_index = require(j, "fredholm_index", root).get<long>();
    r.index_sum = require(j, "index_sum", root).get<long>();
    r.state_dim_difference = require(j, "state_dim_difference", root).get<long>();

    const Json& dj = require(j, "diagnostics", root);
    const std::string droot = field("diagnostics");
    auto& d = r.diagnostics;
    d.omega_residual = real_from_json(require(dj, "omega_residual", droot), droot + ".omega_residual");
    d.q_residual = real_from_json(require(dj, "q_residual", droot), droot + ".q_residual");
    d.q_identity_residual = real_from_json(require(dj, "q_identity_residual", droot), droot + ".q_identity_residual");
    d.omega_star_mismatch = real_from_json(require(dj, "omega_star_mismatch", droot), droot + ".omega_star_mismatch");
    d.q_min_eigenvalue = real_from_json(require(dj, "q_min_eigenvalue", droot), droot + ".q_min_eigenvalue");
    d.q_max_eigenvalue = real_from_json(require(dj, "q_max_eigenvalue", droot), droot + ".q_max_eigenvalue");
    d.stein_conditioning = real_from_json(require(dj, "stein_conditioning", droot), droot + ".stein_conditioning");
    d.kernel_gaps = gaps_from_json(require(dj, "kernel_gaps", droot), droot + ".kernel_gaps");
    d.cokernel_gaps = gaps_from_json(require(dj, "cokernel_gaps", droot), droot + ".cokernel_gaps");
    const Json& w = require(dj, "warnings", droot);
    if (!w.is_array()) fail(droot + ".warnings", "expected an array");
    for (const auto& s : w) {
        if (!s.is_string()) fail(droot + ".warnings", "expected strings");
        d.warnings.push_back(s.get<std::string>());
    }
    return r;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace whidx
