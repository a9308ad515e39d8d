#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "whidx/numerics.hpp"

namespace whidx {

struct IndexReport;

/// Finite Blaschke product zeta * prod_k (z - alpha_k) / (1 - conj(alpha_k) z).
struct BlaschkeProduct {
    Complex zeta{1.0, 0.0};
    std::vector<Complex> zeros;

    std::size_t degree() const { return zeros.size(); }

    /// Throws NotUnimodular or ZeroOnOrOutsideDisc.
    void check(const Tolerances& t = {}) const;

    /// z^n with unit constant.
    static BlaschkeProduct monomial(std::size_t n);
};

/// Pointwise value; PoleHit when z lands on some 1 / conj(alpha_k).
Complex evaluate_b(const BlaschkeProduct& b, Complex z);

/// Rational functional calculus zeta * prod_k (A - alpha_k I)(I - conj(alpha_k) A)^{-1}.
/// Throws UnstableArgument when the spectral radius of A is not below 1.
ComplexMatrix phi_of_matrix(const BlaschkeProduct& b, const ComplexMatrix& A);

/// Taylor coefficients psi_0..psi_{count-1} of b, by multiplying out the
/// geometric expansions of the individual factors.
std::vector<Complex> blaschke_taylor(const BlaschkeProduct& b, std::size_t count);

/// Rank of the defect operator (I - M^* M)^{1/2}, i.e. dim minus the
/// multiplicity of 1 in M^* M. Throws NotAContraction when |M| > 1 + residual.
std::size_t defect_index(const ComplexMatrix& M, const Tolerances& t = {});

/// `count` equispaced points on the circle |z| = radius.
std::vector<Complex> circle_points(std::size_t count = 16, double radius = 0.7);

/// Values of C (I - zA)^{-1} phi(A^*) x / C (I - zA)^{-1} x at the sample
/// points, with x a unit eigenvector of phi(A^*)^* phi(A^*) for eigenvalue 1.
std::vector<Complex> reconstruct_phi(const ComplexMatrix& A, const ComplexMatrix& C,
                                     const BlaschkeProduct& phi,
                                     std::span<const Complex> sample_points,
                                     const Tolerances& t = {});

/// Index data of the scalar symbol phi * conj(m) on the circle.
IndexReport scalar_index_report(const BlaschkeProduct& phi, const BlaschkeProduct& m);

}  // namespace whidx
