#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "whidx/numerics.hpp"

namespace whidx {

struct BlaschkeProduct;

/// State-space realization Theta(z) = D + z C (I - z A)^{-1} B of an m x m
/// function with an n-dimensional state space.
struct Realization {
    ComplexMatrix A;  // n x n
    ComplexMatrix B;  // n x m
    ComplexMatrix C;  // m x n
    ComplexMatrix D;  // m x m

    Eigen::Index state_dim() const { return A.rows(); }
    Eigen::Index io_dim() const { return D.rows(); }

    /// Throws DimensionMismatch unless the four blocks fit together and m >= 1.
    void check_dimensions() const;

    /// The systems operator [[A, B], [C, D]].
    ComplexMatrix systems_operator() const;
};

struct ValidationReport {
    double left_residual = 0.0;    // |T^* T - I|
    double right_residual = 0.0;   // |T T^* - I|
    double spectral_radius = 0.0;  // of A
    bool passed = false;
    bool margin_warning = false;   // spectral radius above 1 - 1e-6
};

ValidationReport validate(const Realization& r, const Tolerances& t = {});

/// Theta(z). Throws SingularResolvent when I - zA is numerically singular.
ComplexMatrix evaluate(const Realization& r, Complex z);

/// Theta_0 = D, Theta_k = C A^{k-1} B.
ComplexMatrix taylor_coefficient(const Realization& r, std::size_t k);

/// First `count` Taylor coefficients, computed with one running power of A.
std::vector<ComplexMatrix> taylor_coefficients(const Realization& r, std::size_t count);

/// Realization of z -> Theta(conj z)^*, i.e. {A^*, C^*, B^*, D^*}.
Realization tilde(const Realization& r);

/// Realization of z^n: {J_n(0), e_n, e_1^T, 0}; the constant 1 for n = 0.
Realization monomial_realization(std::size_t n);

/// Constant unitary function with an empty state space.
Realization constant_realization(const ComplexMatrix& D);

/// Cascade of degree-one sections; throws ZeroOnOrOutsideDisc.
Realization blaschke_realization(const BlaschkeProduct& b);

/// Series connection realizing Theta_outer(z) * Theta_inner(z).
Realization cascade(const Realization& outer, const Realization& inner);

/// diag(theta_1, ..., theta_m) from scalar realizations.
Realization diag_inner(std::span<const Realization> entries);

/// Same transfer function, state transformed by the unitary U: {U A U^*, U B, C U^*, D}.
Realization state_transform(const Realization& r, const ComplexMatrix& U);

/// Haar-distributed unitary matrix of size n.
ComplexMatrix random_unitary(Eigen::Index n, std::uint64_t seed);

/// Stable unitary realization with state dimension n and I/O dimension m: a
/// cascade of pieces of state dimension at most m, each cut out of a Haar
/// unitary systems operator and redrawn until its spectral radius is at most
/// `max_radius`, followed by a Haar state transform.
Realization random_realization(Eigen::Index n, Eigen::Index m, std::uint64_t seed,
                               double max_radius = 0.95);

}  // namespace whidx
