#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "whidx/blaschke.hpp"
#include "whidx/worked_example.hpp"
#include "whidx/oracle.hpp"
#include "whidx/report_io.hpp"
#include "whidx/whindex.hpp"

namespace {

using namespace whidx;

enum ExitCode : int {
    kOk = 0,
    kParseError = 1,
    kValidationFailure = 2,
    kInconsistent = 3,
    kNoStabilization = 4,
};

struct CommonOptions {
    std::string input;
    std::string example;
    std::optional<std::uint64_t> random_seed;
    long nv = 3;
    long nw = 2;
    long m = 2;
    double max_radius = 0.5;
    double tol_rank = Tolerances{}.rank_rel;
    double tol_eig = Tolerances{}.eig_one;
    double tol_residual = Tolerances{}.residual;
    std::optional<std::size_t> oracle_n_max;
    std::string json_out;
    bool no_validate = false;

    Tolerances tolerances() const {
        Tolerances t{tol_rank, tol_eig, tol_residual};
        t.check();
        return t;
    }
};

struct ScalarOptions {
    std::string input;
    std::vector<std::string> phi_zeros;
    std::vector<std::string> m_zeros;
    std::string phi_zeta = "1,0";
    std::string m_zeta = "1,0";
    bool cross_check = false;
    double tol_rank = Tolerances{}.rank_rel;
    double tol_eig = Tolerances{}.eig_one;
    double tol_residual = Tolerances{}.residual;
    std::string json_out;
};

/// Parse failures that are not about JSON syntax still exit with code 1.
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

Complex parse_complex_flag(const std::string& text, const std::string& flag) {
    std::istringstream in(text);
    double re = 0.0;
    double im = 0.0;
    char comma = 0;
    if (!(in >> re)) throw Error(ErrorKind::Parse, flag + ": expected RE,IM but got \"" + text + "\"");
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) {
            throw Error(ErrorKind::Parse, flag + ": expected RE,IM but got \"" + text + "\"");
        }
    }
    std::string rest;
    if (in >> rest) throw Error(ErrorKind::Parse, flag + ": trailing text in \"" + text + "\"");
    return {re, im};
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    if (xs.empty()) return "(none)";
    std::ostringstream out;
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? " " : "") << xs[i];
    return out.str();
}

std::string sci(double x) {
    std::ostringstream out;
    out << std::scientific << std::setprecision(3) << x;
    return out.str();
}

MatrixProblem load_problem(const CommonOptions& opt) {
    const int sources = int(!opt.input.empty()) + int(!opt.example.empty()) + int(opt.random_seed.has_value());
    if (sources != 1) throw UsageError("give exactly one of INPUT, --example or --random");
    if (opt.random_seed) {
        if (opt.nv < 0 || opt.nw < 0 || opt.m < 1) throw UsageError("--nv, --nw >= 0 and --m >= 1 required");
        if (!(opt.max_radius > 0.0 && opt.max_radius < 1.0)) throw UsageError("--max-radius must lie in (0, 1)");
        const std::uint64_t seed = *opt.random_seed;
        return {random_realization(opt.nv, opt.m, 2 * seed, opt.max_radius),
                random_realization(opt.nw, opt.m, 2 * seed + 1, opt.max_radius)};
    }
    Json doc;
    if (!opt.example.empty()) {
        if (opt.example != "gkr") throw UsageError("unknown example \"" + opt.example + "\" (known: gkr)");
        doc = parse_json_text(kWorkedExampleJson, "built-in example");
    } else {
        doc = parse_json_text(read_file(opt.input), opt.input);
    }
    if (is_scalar_problem(doc)) {
        const ScalarProblem s = scalar_problem_from_json(doc);
        return {blaschke_realization(s.phi), blaschke_realization(s.m)};
    }
    return matrix_problem_from_json(doc);
}

bool validate_problem(const MatrixProblem& p, const Tolerances& t) {
    bool ok = true;
    for (const auto& [name, r] : {std::pair<const char*, const Realization*>{"V", &p.V}, {"W", &p.W}}) {
        const ValidationReport v = validate(*r, t);
        if (!v.passed) {
            std::cerr << "validation failed for " << name << ": |T*T - I| = " << sci(v.left_residual)
                      << ", |TT* - I| = " << sci(v.right_residual) << ", spectral radius = " << v.spectral_radius
                      << "\n";
            ok = false;
        } else if (v.margin_warning) {
            std::cerr << "warning: spectral radius of " << name << " is " << v.spectral_radius
                      << ", close to the unit circle\n";
        }
    }
    return ok;
}

void print_report(const IndexReport& r) {
    const auto& d = r.diagnostics;
    std::cout << "m: " << r.m << "\n"
              << "negative indices: " << join(r.negative_indices) << "\n"
              << "zero count: " << r.zero_count << "\n"
              << "positive indices: " << join(r.positive_indices) << "\n"
              << "all indices: " << join(r.all_indices()) << "\n"
              << "kernel dims: " << join(r.kernel_dims) << "\n"
              << "cokernel dims: " << join(r.cokernel_dims) << "\n"
              << "mu: " << join(r.mu) << "\n"
              << "nu: " << join(r.nu) << "\n"
              << "dim ker T_R: " << r.n_TR << "\n"
              << "codim ran T_R: " << r.d_TR << "\n"
              << "Fredholm index: " << r.fredholm_index << "\n"
              << "index sum: " << r.index_sum << "\n"
              << "dim X_v - dim X_w: " << r.state_dim_difference << "\n"
              << "residuals: Omega " << sci(d.omega_residual) << ", Q " << sci(d.q_residual) << ", Q vs I - Omega*Omega "
              << sci(d.q_identity_residual) << ", Omega_* vs Omega* " << sci(d.omega_star_mismatch) << "\n"
              << "Q spectrum: [" << d.q_min_eigenvalue << ", " << d.q_max_eigenvalue << "]\n"
              << "Stein conditioning: " << d.stein_conditioning << "\n";
    for (const auto& w : d.warnings) std::cout << "warning: " << w << "\n";
}

int run_indices(const CommonOptions& opt) {
    const Tolerances t = opt.tolerances();
    const MatrixProblem p = load_problem(opt);
    if (!opt.no_validate && !validate_problem(p, t)) return kValidationFailure;
    const IndexReport r = full_report(p.V, p.W, t);
    print_report(r);
    if (!opt.json_out.empty()) write_file(opt.json_out, dump_json(report_to_json(r)));
    return r.index_sum == r.state_dim_difference ? kOk : kInconsistent;
}

BlaschkeProduct blaschke_from_flags(const std::string& zeta, const std::vector<std::string>& zeros,
                                    const std::string& flag) {
    BlaschkeProduct b;
    b.zeta = parse_complex_flag(zeta, flag + "-zeta");
    for (const auto& z : zeros) b.zeros.push_back(parse_complex_flag(z, flag + "-zero"));
    return b;
}

int run_scalar(const ScalarOptions& opt) {
    Tolerances t{opt.tol_rank, opt.tol_eig, opt.tol_residual};
    t.check();
    ScalarProblem s;
    if (!opt.input.empty()) {
        if (!opt.phi_zeros.empty() || !opt.m_zeros.empty()) throw UsageError("give INPUT or zero lists, not both");
        s = scalar_problem_from_json(parse_json_text(read_file(opt.input), opt.input));
    } else {
        s = {blaschke_from_flags(opt.phi_zeta, opt.phi_zeros, "--phi"),
             blaschke_from_flags(opt.m_zeta, opt.m_zeros, "--m")};
    }
    try {
        s.phi.check(t);
        s.m.check(t);
    } catch (const Error& e) {
        std::cerr << "invalid Blaschke data: " << e.what() << "\n";
        return kValidationFailure;
    }
    const IndexReport r = scalar_index_report(s.phi, s.m);
    const long winding = static_cast<long>(s.phi.degree()) - static_cast<long>(s.m.degree());
    std::cout << "deg phi: " << s.phi.degree() << "\n"
              << "deg m: " << s.m.degree() << "\n"
              << "winding number: " << winding << "\n"
              << "Fredholm index: " << r.fredholm_index << "\n"
              << "dim ker T_R: " << r.n_TR << "\n"
              << "codim ran T_R: " << r.d_TR << "\n"
              << (r.n_TR == 0 && r.d_TR == 0 ? "T_R is invertible\n" : "");
    if (!opt.json_out.empty()) write_file(opt.json_out, dump_json(report_to_json(r)));
    if (!opt.cross_check) return kOk;

    const IndexReport mr = full_report(blaschke_realization(s.phi), blaschke_realization(s.m), t);
    const bool agree = mr.all_indices() == r.all_indices() && mr.n_TR == r.n_TR && mr.d_TR == r.d_TR &&
                       mr.fredholm_index == r.fredholm_index;
    std::cout << "matrix pipeline indices: " << join(mr.all_indices()) << "\n"
              << "cross-check: " << (agree ? "agree" : "DISAGREE") << "\n";
    return agree ? kOk : kInconsistent;
}

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

int run_verify(const CommonOptions& opt) {
    const Tolerances t = opt.tolerances();
    const MatrixProblem p = load_problem(opt);
    if (!opt.no_validate && !validate_problem(p, t)) return kValidationFailure;
    const IndexReport r = full_report(p.V, p.W, t);
    std::vector<Check> checks;

    const std::size_t k_last = r.kernel_dims.size();  // one past the first zero
    const auto chain = kernel_chain_dims(p.V, p.W, k_last, t);
    std::vector<std::size_t> pipeline_ext = r.kernel_dims;
    pipeline_ext.push_back(0);
    checks.push_back({"kernel chain matches pipeline", chain == pipeline_ext, "chain " + join(chain)});

    const std::size_t k_max = r.negative_indices.empty() ? 1 : static_cast<std::size_t>(-r.negative_indices.front()) + 1;
    const OracleResult ker = oracle_kernel_dims(p.V, p.W, k_max, t, opt.oracle_n_max);
    std::vector<std::size_t> expected_ker(k_max + 1, 0);
    for (std::size_t k = 0; k < r.kernel_dims.size() && k <= k_max; ++k) expected_ker[k] = r.kernel_dims[k];
    checks.push_back({"oracle kernel dims", ker.dims == expected_ker,
                      "oracle " + join(ker.dims) + ", sections " + join(ker.stabilized_at)});

    const std::size_t c_max = r.positive_indices.empty() ? 1 : static_cast<std::size_t>(r.positive_indices.front()) + 1;
    const OracleResult coker = oracle_kernel_dims(p.W, p.V, c_max, t, opt.oracle_n_max);
    std::vector<std::size_t> expected_coker(c_max + 1, 0);
    for (std::size_t k = 0; k < r.cokernel_dims.size() && k <= c_max; ++k) expected_coker[k] = r.cokernel_dims[k];
    checks.push_back({"oracle cokernel dims", coker.dims == expected_coker,
                      "oracle " + join(coker.dims) + ", sections " + join(coker.stabilized_at)});

    checks.push_back({"index sum equals dim X_v - dim X_w", r.index_sum == r.state_dim_difference,
                      std::to_string(r.index_sum) + " vs " + std::to_string(r.state_dim_difference)});
    checks.push_back({"Q equals I - Omega*Omega", r.diagnostics.q_identity_residual <= t.residual,
                      sci(r.diagnostics.q_identity_residual)});

    constexpr std::size_t kSection = 32;
    const DecompositionReport dec = verify_decomposition(p.V, p.W, kSection, t);
    checks.push_back({"T_R = T_V T_W* + H_V H_W*", dec.passed,
                      "residual " + sci(dec.residual) + ", bound " + sci(dec.bound)});
    for (const auto& [name, real] : {std::pair<const char*, const Realization*>{"V", &p.V}, {"W", &p.W}}) {
        const AppendixReport a = verify_appendix(*real, kSection, t);
        checks.push_back({std::string("Toeplitz/Hankel identities for ") + name, a.passed,
                          "coisometry " + sci(a.coisometry_residual) + ", isometry " + sci(a.isometry_residual) +
                              ", tilde " + sci(a.tilde_residual)});
    }

    bool all = true;
    Json jchecks = Json::array();
    std::cout << "indices: " << join(r.all_indices()) << "\n";
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        all = all && c.passed;
        Json jc = Json::object();
        jc["name"] = c.name;
        jc["passed"] = c.passed;
        jc["detail"] = c.detail;
        jchecks.push_back(std::move(jc));
    }
    if (!opt.json_out.empty()) {
        Json out = Json::object();
        out["report"] = report_to_json(r);
        out["checks"] = std::move(jchecks);
        out["passed"] = all;
        write_file(opt.json_out, dump_json(out));
    }
    return all ? kOk : kInconsistent;
}

void add_tolerance_flags(CLI::App* cmd, double& rank, double& eig, double& residual) {
    cmd->add_option("--tol-rank", rank, "relative singular-value cutoff")->capture_default_str();
    cmd->add_option("--tol-eig", eig, "distance-to-1 cutoff for unit eigenvalues")->capture_default_str();
    cmd->add_option("--tol-residual", residual, "contract-check cutoff")->capture_default_str();
}

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("input", opt.input, "problem file (JSON)");
    cmd->add_option("--example", opt.example, "built-in example (gkr)");
    cmd->add_option("--random", opt.random_seed, "generate a random pair from this seed");
    cmd->add_option("--nv", opt.nv, "state dimension of V for --random")->capture_default_str();
    cmd->add_option("--nw", opt.nw, "state dimension of W for --random")->capture_default_str();
    cmd->add_option("--m", opt.m, "matrix size for --random")->capture_default_str();
    cmd->add_option("--max-radius", opt.max_radius, "spectral radius cap for --random")->capture_default_str();
    add_tolerance_flags(cmd, opt.tol_rank, opt.tol_eig, opt.tol_residual);
    cmd->add_option("--oracle-n-max", opt.oracle_n_max, "largest section size tried by the oracle");
    cmd->add_option("--json-out", opt.json_out, "write the machine-readable report here");
    cmd->add_flag("--no-validate", opt.no_validate, "skip unitarity and stability checks");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wiener-Hopf indices of R = V W* from unitary realizations"};
    app.require_subcommand(1);

    CommonOptions indices_opt;
    CommonOptions verify_opt;
    ScalarOptions scalar_opt;

    auto* indices = app.add_subcommand("indices", "compute the full index structure");
    add_common_flags(indices, indices_opt);

    auto* verify = app.add_subcommand("verify", "cross-check the index structure against independent methods");
    add_common_flags(verify, verify_opt);

    auto* scalar = app.add_subcommand("scalar", "index data of phi * conj(m) for Blaschke products");
    scalar->add_option("input", scalar_opt.input, "problem file with \"phi\" and \"m\" (JSON)");
    scalar->add_option("--phi-zero", scalar_opt.phi_zeros, "zero of phi as RE,IM (repeatable)");
    scalar->add_option("--m-zero", scalar_opt.m_zeros, "zero of m as RE,IM (repeatable)");
    scalar->add_option("--phi-zeta", scalar_opt.phi_zeta, "unimodular constant of phi")->capture_default_str();
    scalar->add_option("--m-zeta", scalar_opt.m_zeta, "unimodular constant of m")->capture_default_str();
    scalar->add_flag("--cross-check", scalar_opt.cross_check, "compare with the matrix pipeline");
    add_tolerance_flags(scalar, scalar_opt.tol_rank, scalar_opt.tol_eig, scalar_opt.tol_residual);
    scalar->add_option("--json-out", scalar_opt.json_out, "write the machine-readable report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParseError;
    }

    try {
        if (indices->parsed()) return run_indices(indices_opt);
        if (verify->parsed()) return run_verify(verify_opt);
        return run_scalar(scalar_opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Parse:
            case ErrorKind::DimensionMismatch:
                return kParseError;
            case ErrorKind::NoStabilization:
                return kNoStabilization;
            case ErrorKind::InconsistentIndexCount:
            case ErrorKind::NonMonotone:
            case ErrorKind::MalformedSequence:
                return kInconsistent;
            default:
                return kValidationFailure;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
}
