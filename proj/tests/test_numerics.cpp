#include <doctest.h>

#include <cmath>

#include "support/generators.hpp"
#include "whidx/numerics.hpp"

using namespace whidx;

namespace {

ComplexMatrix diag(std::initializer_list<double> xs) {
    ComplexMatrix M = ComplexMatrix::Zero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) M(i, i) = x, ++i;
    return M;
}

ComplexMatrix jordan_zero(Eigen::Index n) {
    ComplexMatrix J = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) J(i, i + 1) = 1.0;
    return J;
}

}  // namespace

TEST_CASE("tolerance defaults and validation") {
    const Tolerances t;
    CHECK(t.rank_rel == 1e-9);
    CHECK(t.eig_one == 1e-8);
    CHECK(t.residual == 1e-8);
    CHECK_NOTHROW(t.check());
    CHECK_THROWS_AS((Tolerances{0.0, 1e-8, 1e-8}.check()), Error);
    CHECK_THROWS_AS((Tolerances{1e-9, -1.0, 1e-8}.check()), Error);
}

TEST_CASE("rank_tol") {
    const Tolerances t;
    CHECK(rank_tol(identity(3), t) == 3);
    CHECK(rank_tol(ComplexMatrix::Zero(4, 2), t) == 0);
    CHECK(rank_tol(diag({1.0, 1e-15}), t) == 1);
    CHECK(rank_tol(ComplexMatrix(0, 5), t) == 0);
    SUBCASE("scale floor suppresses noise-only matrices") {
        const ComplexMatrix noise = 1e-14 * identity(3);
        CHECK(rank_tol(noise, t) == 3);
        CHECK(rank_tol(noise, t, 1.0) == 0);
    }
}

TEST_CASE("kernel_basis") {
    const Tolerances t;
    CHECK(kernel_basis(identity(2), t).rows() == 2);
    CHECK(kernel_basis(identity(2), t).cols() == 0);

    const ComplexMatrix K = kernel_basis(ComplexMatrix::Zero(2, 2), t);
    REQUIRE(K.cols() == 2);
    CHECK(testing::distance(K.adjoint() * K, identity(2)) < 1e-12);

    ComplexMatrix M = ComplexMatrix::Zero(2, 2);
    M(0, 0) = 1.0;
    const ComplexMatrix k1 = kernel_basis(M, t);
    REQUIRE(k1.cols() == 1);
    CHECK(std::abs(k1(0, 0)) < 1e-12);
    CHECK(std::abs(std::abs(k1(1, 0)) - 1.0) < 1e-12);

    SUBCASE("random rank-deficient matrices") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const ComplexMatrix U = random_unitary(6, seed);
            const ComplexMatrix X = U.leftCols(4) * random_unitary(4, seed + 100).topRows(4) * U.leftCols(4).adjoint();
            const ComplexMatrix N = kernel_basis(X, t);
            CHECK(N.cols() == 2);
            CHECK(op_norm(X * N) < 1e-12);
        }
    }
}

TEST_CASE("eig_one_multiplicity") {
    const Tolerances t;
    CHECK(eig_one_multiplicity(identity(6), t) == 6);
    CHECK(eig_one_multiplicity(ComplexMatrix::Zero(3, 3), t) == 0);
    CHECK(eig_one_multiplicity(diag({1.0, 0.5, 1.0}), t) == 2);
    CHECK(largest_eigenvalue_below_one(diag({1.0, 0.5, 1.0}), t) == doctest::Approx(0.5));
    CHECK(std::isinf(largest_eigenvalue_below_one(identity(2), t)));

    ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
    skew(0, 1) = 1.0;
    try {
        eig_one_multiplicity(skew, t);
        FAIL("expected NonHermitian");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonHermitian);
    }
}

TEST_CASE("hermitian_eigenvalues ascend") {
    const RealVector ev = hermitian_eigenvalues(diag({3.0, -1.0, 2.0}));
    REQUIRE(ev.size() == 3);
    CHECK(ev(0) == doctest::Approx(-1.0));
    CHECK(ev(1) == doctest::Approx(2.0));
    CHECK(ev(2) == doctest::Approx(3.0));
}

TEST_CASE("svd, spectral radius and dense solves") {
    const SvdResult s = svd(diag({3.0, 2.0}));
    CHECK(s.sigma(0) == doctest::Approx(3.0));
    CHECK(s.sigma(1) == doctest::Approx(2.0));
    CHECK(testing::distance(s.U * s.sigma.cast<Complex>().asDiagonal() * s.V.adjoint(), diag({3.0, 2.0})) < 1e-12);

    CHECK(spectral_radius(jordan_zero(4)) == 0.0);
    CHECK(spectral_radius(identity(3)) == doctest::Approx(1.0));
    CHECK(spectral_radius(ComplexMatrix(0, 0)) == 0.0);
    CHECK(op_norm(ComplexMatrix(0, 3)) == 0.0);

    const ComplexMatrix A = diag({2.0, 4.0});
    const ComplexMatrix x = solve_dense(A, ComplexMatrix::Ones(2, 1));
    CHECK(std::abs(x(0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(x(1, 0) - 0.25) < 1e-14);
    try {
        solve_dense(diag({1.0, 0.0}), ComplexMatrix::Ones(2, 1));
        FAIL("expected SingularSystem");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularSystem);
    }
}

TEST_CASE("empty shapes follow the empty-sum convention") {
    const ComplexMatrix a(3, 0);
    const ComplexMatrix b(0, 2);
    const ComplexMatrix p = a * b;
    CHECK(p.rows() == 3);
    CHECK(p.cols() == 2);
    CHECK(p.norm() == 0.0);
}

TEST_CASE("matrix_power matches repeated products") {
    const ComplexMatrix A = random_unitary(4, 7) * 0.9;
    ComplexMatrix P = identity(4);
    for (std::size_t k = 0; k <= 9; ++k) {
        CHECK(testing::distance(matrix_power(A, k), P) < 1e-12);
        P = P * A;
    }
}
