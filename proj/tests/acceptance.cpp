// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "whidx/blaschke.hpp"
#include "whidx/worked_example.hpp"
#include "whidx/oracle.hpp"
#include "whidx/report_io.hpp"
#include "whidx/whindex.hpp"

using namespace whidx;
using whidx::testing::distance;
using whidx::testing::PairCase;
using Dims = std::vector<std::size_t>;

namespace {

constexpr double kMatrixTol = 1e-10;       // matrix equalities in the worked example, Q = 0
constexpr double kRuntimeExample = 1.0;    // seconds
constexpr double kQIdentityTol = 1e-8;     // |Q - (I - Omega^* Omega)|
constexpr double kRuntimeEquivalence = 30.0;
constexpr std::size_t kSectionLimit = 64;  // oracle sections must settle below this
constexpr double kReconstructionTol = 1e-6;
constexpr double kAppendixExactTol = 1e-10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects failure messages for one criterion.
struct Outcome {
    std::vector<std::string> failures;
    std::string summary;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

template <typename T>
std::string str(const std::vector<T>& xs) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
    out << ")";
    return out.str();
}

long state_difference(const PairCase& p) { return static_cast<long>(p.V.state_dim() - p.W.state_dim()); }

Outcome worked_example() {
    Outcome o;
    const auto start = Clock::now();
    const MatrixProblem p = matrix_problem_from_json(parse_json_text(kWorkedExampleJson, "example"));
    const ComplexMatrix Omega = coupling_omega(p.V, p.W);
    const ComplexMatrix Co = c_circ(p.V, p.W, Omega);
    const ComplexMatrix Q = gram_q(p.W, Co);
    const IndexReport r = full_report(p.V, p.W);
    const double elapsed = seconds_since(start);

    o.require(distance(Co, p.W.B.adjoint()) <= kMatrixTol, "C_o != B_w^*");
    o.require(distance(Q, identity(6)) <= kMatrixTol, "Q != I_6");
    o.require(r.kernel_dims == Dims{6, 4, 2, 1, 0}, "kernel dims " + str(r.kernel_dims));
    o.require(r.mu == Dims{2, 2, 1, 1}, "mu " + str(r.mu));
    o.require(r.negative_indices == std::vector<int>{-4, -2}, "negative " + str(r.negative_indices));
    std::vector<int> pos = r.positive_indices;
    std::sort(pos.begin(), pos.end());
    o.require(pos == std::vector<int>{3, 5}, "positive " + str(pos));
    o.require(r.zero_count == 1, "zero count");
    o.require(r.fredholm_index == -2, "Fredholm index " + std::to_string(r.fredholm_index));
    o.require(elapsed < kRuntimeExample, "runtime " + std::to_string(elapsed) + " s");
    o.summary = "indices " + str(r.all_indices()) + ", kernel dims " + str(r.kernel_dims) + ", " +
                std::to_string(elapsed * 1e3) + " ms";
    return o;
}

Outcome identity_case() {
    Outcome o;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Eigen::Index n = static_cast<Eigen::Index>(seed % 11);
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(seed % 4);
        const Realization V = random_realization(n, m, 1000 + seed);
        o.require(validate(V).passed, "realization " + std::to_string(seed) + " does not validate");
        const ComplexMatrix Q = gram_q(V, c_circ(V, V, coupling_omega(V, V)));
        worst = std::max(worst, op_norm(Q));
        const IndexReport r = full_report(V, V);
        o.require(r.zero_count == r.m && r.n_TR == 0 && r.d_TR == 0, "nonzero index for seed " + std::to_string(seed));
    }
    o.require(worst <= kMatrixTol, "|Q| = " + std::to_string(worst));
    std::ostringstream s;
    s << "20 pairs, max |Q| = " << worst;
    o.summary = s.str();
    return o;
}

Outcome scalar_monomials() {
    Outcome o;
    const BlaschkeProduct phi = BlaschkeProduct::monomial(2);
    const BlaschkeProduct m = BlaschkeProduct::monomial(3);
    const IndexReport s = scalar_index_report(phi, m);
    const IndexReport r = full_report(blaschke_realization(phi), blaschke_realization(m));
    const std::size_t oracle = section_kernel_dim(blaschke_realization(phi), blaschke_realization(m), 0, 8);
    o.require(s.all_indices() == std::vector<int>{-1} && s.n_TR == 1, "scalar formula");
    o.require(r.all_indices() == std::vector<int>{-1} && r.n_TR == 1, "matrix pipeline " + str(r.all_indices()));
    o.require(oracle == 1, "oracle kernel dim " + std::to_string(oracle));
    o.summary = "index -1 and dim ker 1 from formula, pipeline and N = 8 section";
    return o;
}

/// Pairs for the method-equivalence criterion: generic random pairs and
/// scrambled diagonal pairs with nontrivial indices, all with dim X <= 8, m <= 4.
std::vector<PairCase> equivalence_pairs() {
    std::vector<PairCase> out;
    for (std::uint64_t seed = 0; out.size() < 60; ++seed) out.push_back(testing::random_pair(5000 + seed, 8, 4));
    for (auto& p : testing::structured_pairs(40, 6000, 8, 0.7)) out.push_back(std::move(p));
    return out;
}

Outcome method_equivalence(const std::vector<PairCase>& pairs) {
    Outcome o;
    const auto start = Clock::now();
    double worst = 0.0;
    std::size_t nontrivial = 0;
    for (const auto& p : pairs) {
        o.require(validate(p.V).passed && validate(p.W).passed, p.label + " does not validate");
        const IndexReport r = full_report(p.V, p.W);
        Dims expected = r.kernel_dims;
        expected.resize(r.kernel_dims.size() + 2, 0);
        const Dims chain = kernel_chain_dims(p.V, p.W, expected.size() - 1);
        o.require(chain == expected, p.label + ": chain " + str(chain) + " vs " + str(expected));
        const ComplexMatrix Omega = coupling_omega(p.V, p.W);
        const ComplexMatrix Q = gram_q(p.W, c_circ(p.V, p.W, Omega));
        worst = std::max(worst, distance(Q, identity(p.W.state_dim()) - Omega.adjoint() * Omega));
        if (r.n_TR > 0) ++nontrivial;
    }
    const double elapsed = seconds_since(start);
    o.require(worst <= kQIdentityTol, "|Q - (I - Omega*Omega)| = " + std::to_string(worst));
    o.require(elapsed < kRuntimeEquivalence, "runtime " + std::to_string(elapsed) + " s");
    std::ostringstream s;
    s << pairs.size() << " pairs (" << nontrivial << " with nontrivial kernel), max |Q - (I - Omega*Omega)| = " << worst
      << ", " << elapsed << " s";
    o.summary = s.str();
    return o;
}

/// 25 diagonal pairs: monomials and Blaschke zeros of modulus below 0.4,
/// total degree at most 12, mixed by constant unitaries and state transforms.
std::vector<PairCase> oracle_pairs() { return testing::structured_pairs(25, 7000, 12, 0.4); }

Outcome oracle_agreement(const std::vector<PairCase>& pairs) {
    Outcome o;
    std::size_t largest = 0;
    for (const auto& p : pairs) {
        const IndexReport r = full_report(p.V, p.W);
        o.require(r.all_indices() == p.expected, p.label + ": indices " + str(r.all_indices()) + " vs " +
                                                     str(p.expected));
        const std::size_t kappa1 = r.negative_indices.empty() ? 0 : static_cast<std::size_t>(-r.negative_indices.front());
        try {
            const OracleResult orc = oracle_kernel_dims(p.V, p.W, kappa1 + 1);
            Dims expected = r.kernel_dims;
            expected.resize(kappa1 + 2, 0);
            o.require(orc.dims == expected, p.label + ": oracle " + str(orc.dims) + " vs " + str(expected));
            for (std::size_t n : orc.stabilized_at) largest = std::max(largest, n);
            o.require(*std::max_element(orc.stabilized_at.begin(), orc.stabilized_at.end()) < kSectionLimit,
                      p.label + ": sections " + str(orc.stabilized_at));
        } catch (const Error& e) {
            o.require(false, p.label + ": " + e.what());
        }
    }
    o.summary = std::to_string(pairs.size()) + " pairs, largest settling section N = " + std::to_string(largest);
    return o;
}

Outcome index_sum(const std::vector<PairCase>& equivalence, const std::vector<PairCase>& oracle) {
    Outcome o;
    for (const auto* set : {&equivalence, &oracle}) {
        for (const auto& p : *set) {
            const IndexReport r = full_report(p.V, p.W);
            const auto all = r.all_indices();
            const long sum = std::accumulate(all.begin(), all.end(), 0L);
            o.require(sum == state_difference(p), p.label + ": sum " + std::to_string(sum));
        }
    }
    // Independent route on the oracle pairs: dim ker minus dim coker from sections.
    for (const auto& p : oracle) {
        const IndexReport r = full_report(p.V, p.W);
        const std::size_t k_ker = r.negative_indices.empty() ? 1 : static_cast<std::size_t>(-r.negative_indices.front()) + 1;
        const std::size_t k_coker = r.positive_indices.empty() ? 1 : static_cast<std::size_t>(r.positive_indices.front()) + 1;
        try {
            const std::size_t ker = oracle_kernel_dims(p.V, p.W, k_ker).dims.front();
            const std::size_t coker = oracle_kernel_dims(p.W, p.V, k_coker).dims.front();
            const long sum = static_cast<long>(coker) - static_cast<long>(ker);
            o.require(sum == state_difference(p), p.label + ": oracle sum " + std::to_string(sum));
        } catch (const Error& e) {
            o.require(false, p.label + ": " + e.what());
        }
    }
    o.summary = std::to_string(equivalence.size() + oracle.size()) + " pairs; oracle route on " +
                std::to_string(oracle.size());
    return o;
}

Outcome defect_law() {
    Outcome o;
    std::mt19937_64 rng(8000);
    std::size_t beyond = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const BlaschkeProduct phi = testing::random_blaschke(rng() % 7, rng, 0.9);
        const BlaschkeProduct m = testing::random_blaschke(1 + rng() % 6, rng, 0.9);
        const ComplexMatrix A = blaschke_realization(m).A;
        const ComplexMatrix P = phi_of_matrix(phi, A);
        const ComplexMatrix Pa = phi_of_matrix(phi, A.adjoint());
        const std::size_t d = std::min(phi.degree(), m.degree());
        const std::string tag = "deg phi " + std::to_string(phi.degree()) + ", deg m " + std::to_string(m.degree());
        o.require(defect_index(P) == d, tag + ": defect of phi(A) " + std::to_string(defect_index(P)));
        o.require(defect_index(Pa) == d, tag + ": defect of phi(A^*) " + std::to_string(defect_index(Pa)));
        if (phi.degree() >= m.degree()) {
            ++beyond;
            const std::size_t mult = eig_one_multiplicity(hermitian_part(P.adjoint() * P), Tolerances{});
            o.require(mult == 0, tag + ": unit eigenvalues " + std::to_string(mult));
        }
    }
    o.summary = "50 cases, " + std::to_string(beyond) + " with deg phi >= dim X";
    return o;
}

Outcome reconstruction() {
    Outcome o;
    std::mt19937_64 rng(9000);
    const auto points = circle_points(16, 0.7);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        // Half Blaschke cascades, half cut-outs of Haar unitaries; both give I - A^*A = C^*C of rank one.
        const Realization r = trial % 2 == 0 ? blaschke_realization(testing::random_blaschke(n, rng, 0.8))
                                             : random_realization(static_cast<Eigen::Index>(n), 1, rng(), 0.9);
        const BlaschkeProduct phi = testing::random_blaschke(rng() % n, rng, 0.8);
        try {
            const auto values = reconstruct_phi(r.A, r.C, phi, points);
            for (std::size_t i = 0; i < points.size(); ++i) {
                worst = std::max(worst, std::abs(values[i] - evaluate_b(phi, points[i])));
            }
        } catch (const Error& e) {
            o.require(false, "trial " + std::to_string(trial) + ": " + e.what());
        }
    }
    o.require(worst <= kReconstructionTol, "max error " + std::to_string(worst));
    std::ostringstream s;
    s << "20 cases x 16 points, max error " << worst;
    o.summary = s.str();
    return o;
}

Outcome appendix_identities() {
    Outcome o;
    double exact = 0.0;
    auto exact_check = [&](const Realization& r, std::size_t N, const std::string& tag) {
        const AppendixReport a = verify_appendix(r, N);
        const double worst = std::max({a.coisometry_residual, a.isometry_residual, a.tilde_residual});
        o.require(a.coisometry_bound == 0.0 && a.isometry_bound == 0.0 && a.tilde_bound == 0.0,
                  tag + ": nonzero truncation bound for a finitely supported symbol");
        o.require(worst <= kAppendixExactTol, tag + ": residual " + std::to_string(worst));
        exact = std::max(exact, worst);
    };
    for (std::size_t n = 0; n <= 6; ++n) exact_check(monomial_realization(n), std::max<std::size_t>(2 * n, 1), "z^" + std::to_string(n));
    const MatrixProblem p = testing::worked_example();
    exact_check(p.V, 12, "example V");
    exact_check(p.W, 12, "example W");

    std::mt19937_64 rng(9500);
    double ratio = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Realization r = blaschke_realization(testing::random_blaschke(1 + rng() % 6, rng, 0.9));
        const AppendixReport a = verify_appendix(r, 32);
        o.require(a.coisometry_residual <= a.coisometry_bound && a.isometry_residual <= a.isometry_bound &&
                      a.tilde_residual <= a.tilde_bound,
                  "Blaschke trial " + std::to_string(trial) + " exceeds its tail bound");
        for (auto [res, bound] : {std::pair{a.coisometry_residual, a.coisometry_bound},
                                  std::pair{a.isometry_residual, a.isometry_bound},
                                  std::pair{a.tilde_residual, a.tilde_bound}}) {
            if (bound > 0.0) ratio = std::max(ratio, res / bound);
        }
    }
    std::ostringstream s;
    s << "finite support max residual " << exact << "; 20 Blaschke realizations at N = 32, max residual/bound "
      << ratio;
    o.summary = s.str();
    return o;
}

}  // namespace

int main() {
    std::vector<PairCase> equivalence;
    std::vector<PairCase> oracle;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"worked example regression", worked_example},
        {"identity case V = W", identity_case},
        {"scalar monomials z^2 against z^3", scalar_monomials},
        {"kernel sequence equals kernel chain",
         [&] {
             equivalence = equivalence_pairs();
             return method_equivalence(equivalence);
         }},
        {"oracle agreement",
         [&] {
             oracle = oracle_pairs();
             return oracle_agreement(oracle);
         }},
        {"index sum equals state dimension difference", [&] { return index_sum(equivalence, oracle); }},
        {"Blaschke defect law", defect_law},
        {"reconstruction", reconstruction},
        {"Toeplitz/Hankel identities", appendix_identities},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = o.failures.empty();
        failed += ok ? 0 : 1;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
                  << o.summary << "\n";
        for (std::size_t k = 0; k < o.failures.size() && k < 10; ++k) std::cout << "    " << o.failures[k] << "\n";
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
