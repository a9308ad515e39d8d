#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "whidx/errors.hpp"

namespace whidx {

using Complex = std::complex<double>;

/// Dense complex matrix. 0xn and nx0 shapes are ordinary values; products
/// involving them follow the empty-sum convention.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Cutoffs used for every numerical rank or spectral decision.
struct Tolerances {
    double rank_rel = 1e-9;   ///< relative singular-value cutoff
    double eig_one = 1e-8;    ///< distance-to-1 cutoff for unit eigenvalues
    double residual = 1e-8;   ///< contract-check cutoff

    /// Throws PreconditionViolated unless all cutoffs are strictly positive.
    void check() const;
};

struct SvdResult {
    ComplexMatrix U;
    RealVector sigma;  // nonincreasing
    ComplexMatrix V;
};

/// Largest singular value; 0 for matrices with a zero dimension.
double op_norm(const ComplexMatrix& M);

ComplexMatrix identity(Eigen::Index n);

/// Singular values in nonincreasing order.
RealVector singular_values(const ComplexMatrix& M);

/// Full SVD with M = U diag(sigma) V^*, U and V square unitary.
SvdResult svd(const ComplexMatrix& M);

/// Number of singular values above `rank_rel * max(sigma_max, scale_floor)`.
/// With the default floor of zero this is a purely relative cutoff; callers
/// that know the natural scale of their matrix (contractions) may pass 1.
std::size_t rank_tol(const ComplexMatrix& M, const Tolerances& t, double scale_floor = 0.0);

/// Orthonormal basis of the numerical null space, one column per dimension.
ComplexMatrix kernel_basis(const ComplexMatrix& M, const Tolerances& t, double scale_floor = 0.0);

/// Eigenvalues of the Hermitian part of M, ascending. Throws NonHermitian
/// when M is not Hermitian to within `t.residual`.
RealVector hermitian_eigenvalues(const ComplexMatrix& M, const Tolerances& t = {});

/// Count of eigenvalues lambda >= 1 - eig_one of the symmetrized argument.
std::size_t eig_one_multiplicity(const ComplexMatrix& Q, const Tolerances& t);

/// Largest eigenvalue strictly below the unit cutoff (-inf if none). Used
/// to audit borderline multiplicity decisions.
double largest_eigenvalue_below_one(const ComplexMatrix& Q, const Tolerances& t);

/// Solves A x = b; SingularSystem when A is rank deficient at rank_rel.
ComplexMatrix solve_dense(const ComplexMatrix& A, const ComplexMatrix& b, const Tolerances& t = {});

/// max |lambda| over the eigenvalues of A; 0 for the 0x0 matrix.
double spectral_radius(const ComplexMatrix& A);

/// Throws NonHermitian if M is not Hermitian within residual * max(1, |M|).
void require_hermitian(const ComplexMatrix& M, const Tolerances& t);

/// (M + M^*) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& M);

/// Integer power of a square matrix by repeated squaring.
ComplexMatrix matrix_power(const ComplexMatrix& A, std::size_t k);

}  // namespace whidx
