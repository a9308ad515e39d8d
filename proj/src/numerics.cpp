#include "whidx/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace whidx {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonHermitian: return "NonHermitian";
        case ErrorKind::SingularSystem: return "SingularSystem";
        case ErrorKind::SingularResolvent: return "SingularResolvent";
        case ErrorKind::UnstablePair: return "UnstablePair";
        case ErrorKind::ZeroOnOrOutsideDisc: return "ZeroOnOrOutsideDisc";
        case ErrorKind::NotUnimodular: return "NotUnimodular";
        case ErrorKind::PoleHit: return "PoleHit";
        case ErrorKind::UnstableArgument: return "UnstableArgument";
        case ErrorKind::NotAContraction: return "NotAContraction";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::NoUnitEigenvector: return "NoUnitEigenvector";
        case ErrorKind::ZeroDenominator: return "ZeroDenominator";
        case ErrorKind::NonMonotone: return "NonMonotone";
        case ErrorKind::MalformedSequence: return "MalformedSequence";
        case ErrorKind::InconsistentIndexCount: return "InconsistentIndexCount";
        case ErrorKind::NoStabilization: return "NoStabilization";
        case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

void Tolerances::check() const {
    if (!(rank_rel > 0.0) || !(eig_one > 0.0) || !(residual > 0.0)) {
        throw Error(ErrorKind::PreconditionViolated, "tolerances must be strictly positive");
    }
}

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

RealVector singular_values(const ComplexMatrix& M) {
    if (M.rows() == 0 || M.cols() == 0) return RealVector(0);
    Eigen::BDCSVD<ComplexMatrix> dec(M);
    return dec.singularValues();
}

double op_norm(const ComplexMatrix& M) {
    const RealVector s = singular_values(M);
    return s.size() == 0 ? 0.0 : s(0);
}

SvdResult svd(const ComplexMatrix& M) {
    SvdResult out;
    if (M.rows() == 0 || M.cols() == 0) {
        out.U = identity(M.rows());
        out.V = identity(M.cols());
        out.sigma = RealVector(0);
        return out;
    }
    Eigen::BDCSVD<ComplexMatrix> dec(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.U = dec.matrixU();
    out.V = dec.matrixV();
    out.sigma = dec.singularValues();
    return out;
}

namespace {

std::size_t count_above(const RealVector& sigma, const Tolerances& t, double scale_floor) {
    if (sigma.size() == 0) return 0;
    const double scale = std::max(sigma(0), scale_floor);
    if (scale <= 0.0) return 0;
    const double cutoff = t.rank_rel * scale;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff) ++r;
    }
    return r;
}

}  // namespace

std::size_t rank_tol(const ComplexMatrix& M, const Tolerances& t, double scale_floor) {
    return count_above(singular_values(M), t, scale_floor);
}

ComplexMatrix kernel_basis(const ComplexMatrix& M, const Tolerances& t, double scale_floor) {
    const Eigen::Index n = M.cols();
    if (M.rows() == 0 || n == 0) return identity(n);
    const SvdResult s = svd(M);
    const auto r = static_cast<Eigen::Index>(count_above(s.sigma, t, scale_floor));
    return s.V.rightCols(n - r);
}

ComplexMatrix hermitian_part(const ComplexMatrix& M) { return (M + M.adjoint()) / 2.0; }

void require_hermitian(const ComplexMatrix& M, const Tolerances& t) {
    if (M.rows() != M.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "Hermitian check on a non-square matrix");
    }
    const double skew = op_norm(M - M.adjoint());
    const double scale = std::max(1.0, op_norm(M));
    if (skew > t.residual * scale) {
        std::ostringstream msg;
        msg << "|M - M^*| = " << skew << " exceeds " << t.residual * scale;
        throw Error(ErrorKind::NonHermitian, msg.str());
    }
}

RealVector hermitian_eigenvalues(const ComplexMatrix& M, const Tolerances& t) {
    require_hermitian(M, t);
    if (M.rows() == 0) return RealVector(0);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(M), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

std::size_t eig_one_multiplicity(const ComplexMatrix& Q, const Tolerances& t) {
    const RealVector ev = hermitian_eigenvalues(Q, t);
    return static_cast<std::size_t>((ev.array() >= 1.0 - t.eig_one).count());
}

double largest_eigenvalue_below_one(const ComplexMatrix& Q, const Tolerances& t) {
    const RealVector ev = hermitian_eigenvalues(Q, t);
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < 1.0 - t.eig_one) best = std::max(best, ev(i));
    }
    return best;
}

ComplexMatrix solve_dense(const ComplexMatrix& A, const ComplexMatrix& b, const Tolerances& t) {
    if (A.rows() != A.cols() || A.rows() != b.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "solve_dense needs square A with matching rows of b");
    }
    if (A.rows() == 0) return ComplexMatrix(0, b.cols());
    Eigen::FullPivLU<ComplexMatrix> lu(A);
    lu.setThreshold(t.rank_rel);
    if (!lu.isInvertible()) {
        std::ostringstream msg;
        msg << "rank " << lu.rank() << " < " << A.rows();
        throw Error(ErrorKind::SingularSystem, msg.str());
    }
    return lu.solve(b);
}

double spectral_radius(const ComplexMatrix& A) {
    if (A.rows() != A.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "spectral radius of a non-square matrix");
    }
    if (A.rows() == 0) return 0.0;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(A, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

ComplexMatrix matrix_power(const ComplexMatrix& A, std::size_t k) {
    ComplexMatrix result = identity(A.rows());
    ComplexMatrix base = A;
    while (k > 0) {
        if (k & 1U) result = result * base;
        k >>= 1U;
        if (k > 0) base = base * base;
    }
    return result;
}

}  // namespace whidx
