#include "whidx/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace whidx {

namespace {

void check_shapes(const ComplexMatrix& A1, const ComplexMatrix& A2, const ComplexMatrix& R) {
    if (A1.rows() != A1.cols() || A2.rows() != A2.cols() || R.rows() != A1.rows() ||
        R.cols() != A2.rows()) {
        std::ostringstream msg;
        msg << "Stein equation with A1 " << A1.rows() << "x" << A1.cols() << ", A2 " << A2.rows()
            << "x" << A2.cols() << ", R " << R.rows() << "x" << R.cols();
        throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
}

ComplexMatrix solve_direct(const ComplexMatrix& A1, const ComplexMatrix& A2, const ComplexMatrix& R) {
    const Eigen::Index n1 = A1.rows();
    const Eigen::Index n2 = A2.rows();
    const Eigen::Index N = n1 * n2;
    // Column-major vec: vec(A1 S A2^*) = (conj(A2) kron A1) vec(S).
    ComplexMatrix K = identity(N);
    for (Eigen::Index q = 0; q < n2; ++q) {
        for (Eigen::Index p = 0; p < n2; ++p) {
            const Complex c = std::conj(A2(p, q));
            if (c == Complex(0.0)) continue;
            K.block(p * n1, q * n1, n1, n1) -= c * A1;
        }
    }
    const ComplexVector rhs = Eigen::Map<const ComplexVector>(R.data(), N);
    Eigen::PartialPivLU<ComplexMatrix> lu(K);
    const ComplexVector s = lu.solve(rhs);
    return Eigen::Map<const ComplexMatrix>(s.data(), n1, n2);
}

ComplexMatrix solve_series(const ComplexMatrix& A1, const ComplexMatrix& A2, const ComplexMatrix& R,
                           double rho) {
    constexpr double eps = 1e-16;
    const Eigen::Index n1 = A1.rows();
    const Eigen::Index n2 = A2.rows();
    // A nilpotent power vanishes after at most max(n1, n2) steps; otherwise
    // allow a generous multiple of the geometric decay length.
    std::size_t cap = static_cast<std::size_t>(std::max(n1, n2)) + 2;
    if (rho > 0.0) {
        const double decay = std::log(eps) / std::log(rho);
        cap += static_cast<std::size_t>(std::min(4.0 * decay, 1e7));
    }
    const ComplexMatrix A2h = A2.adjoint();
    ComplexMatrix sum = R;
    ComplexMatrix term = R;
    for (std::size_t k = 1; k <= cap; ++k) {
        term = A1 * term * A2h;
        sum += term;
        const double tn = term.norm();
        if (tn == 0.0 || tn <= eps * sum.norm()) return sum;
    }
    return sum;
}

}  // namespace

double stein_conditioning(const ComplexMatrix& A1, const ComplexMatrix& A2) {
    const double p = spectral_radius(A1) * spectral_radius(A2);
    return p >= 1.0 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - p);
}

double stein_residual(const ComplexMatrix& A1, const ComplexMatrix& A2, const ComplexMatrix& R,
                      const ComplexMatrix& S) {
    return op_norm(S - A1 * S * A2.adjoint() - R);
}

ComplexMatrix solve_stein(const ComplexMatrix& A1, const ComplexMatrix& A2, const ComplexMatrix& R,
                          const Tolerances& t, SteinStrategy strategy) {
    t.check();
    check_shapes(A1, A2, R);
    if (R.size() == 0) return ComplexMatrix::Zero(R.rows(), R.cols());
    const double rho = spectral_radius(A1) * spectral_radius(A2);
    if (rho >= 1.0 - 1e-12) {
        std::ostringstream msg;
        msg << "rho(A1) * rho(A2) = " << rho;
        throw Error(ErrorKind::UnstablePair, msg.str());
    }
    if (strategy == SteinStrategy::Auto) {
        strategy = static_cast<std::size_t>(R.size()) <= kDirectSteinLimit ? SteinStrategy::Direct
                                                                           : SteinStrategy::Series;
    }
    return strategy == SteinStrategy::Direct ? solve_direct(A1, A2, R) : solve_series(A1, A2, R, rho);
}

}  // namespace whidx
