#include "whidx/blaschke.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "whidx/whindex.hpp"

namespace whidx {

void BlaschkeProduct::check(const Tolerances& t) const {
    if (std::abs(std::abs(zeta) - 1.0) > t.residual) {
        std::ostringstream msg;
        msg << "|zeta| = " << std::abs(zeta);
        throw Error(ErrorKind::NotUnimodular, msg.str());
    }
    for (std::size_t k = 0; k < zeros.size(); ++k) {
        if (!(std::abs(zeros[k]) < 1.0)) {
            std::ostringstream msg;
            msg << "zero " << k << " = " << zeros[k] << " has modulus " << std::abs(zeros[k]);
            throw Error(ErrorKind::ZeroOnOrOutsideDisc, msg.str());
        }
    }
}

BlaschkeProduct BlaschkeProduct::monomial(std::size_t n) {
    return BlaschkeProduct{Complex(1.0, 0.0), std::vector<Complex>(n, Complex(0.0, 0.0))};
}

Complex evaluate_b(const BlaschkeProduct& b, Complex z) {
    Complex value = b.zeta;
    for (const Complex alpha : b.zeros) {
        const Complex den = 1.0 - std::conj(alpha) * z;
        if (std::abs(den) < 1e-14) {
            std::ostringstream msg;
            msg << "z = " << z << " is a pole (zero alpha = " << alpha << ")";
            throw Error(ErrorKind::PoleHit, msg.str());
        }
        value *= (z - alpha) / den;
    }
    return value;
}

ComplexMatrix phi_of_matrix(const BlaschkeProduct& b, const ComplexMatrix& A) {
    if (A.rows() != A.cols()) throw Error(ErrorKind::DimensionMismatch, "phi_of_matrix needs a square matrix");
    const double rho = spectral_radius(A);
    if (!(rho < 1.0)) {
        std::ostringstream msg;
        msg << "spectral radius " << rho << " is not below 1";
        throw Error(ErrorKind::UnstableArgument, msg.str());
    }
    const Eigen::Index n = A.rows();
    const ComplexMatrix I = identity(n);
    ComplexMatrix out = b.zeta * I;
    // The factors commute, so the order of multiplication is immaterial.
    for (const Complex alpha : b.zeros) {
        const ComplexMatrix num = A - alpha * I;
        const ComplexMatrix den = I - std::conj(alpha) * A;
        out = out * Eigen::PartialPivLU<ComplexMatrix>(den).solve(num);
    }
    return out;
}

std::vector<Complex> blaschke_taylor(const BlaschkeProduct& b, std::size_t count) {
    std::vector<Complex> acc(count, Complex(0.0));
    if (count == 0) return acc;
    acc[0] = b.zeta;
    std::vector<Complex> factor(count);
    std::vector<Complex> next(count);
    for (const Complex alpha : b.zeros) {
        // (z - a) / (1 - conj(a) z) = -a + sum_{n>=1} conj(a)^{n-1} (1 - |a|^2) z^n
        const Complex ac = std::conj(alpha);
        factor[0] = -alpha;
        Complex p(1.0);
        for (std::size_t n = 1; n < count; ++n) {
            factor[n] = p * (1.0 - std::norm(alpha));
            p *= ac;
        }
        for (std::size_t n = 0; n < count; ++n) {
            Complex s(0.0);
            for (std::size_t j = 0; j <= n; ++j) s += acc[j] * factor[n - j];
            next[n] = s;
        }
        acc.swap(next);
    }
    return acc;
}

std::size_t defect_index(const ComplexMatrix& M, const Tolerances& t) {
    if (M.rows() != M.cols()) throw Error(ErrorKind::DimensionMismatch, "defect index of a non-square matrix");
    const double norm = op_norm(M);
    if (norm > 1.0 + t.residual) {
        std::ostringstream msg;
        msg << "|M| = " << norm;
        throw Error(ErrorKind::NotAContraction, msg.str());
    }
    return static_cast<std::size_t>(M.rows()) - eig_one_multiplicity(hermitian_part(M.adjoint() * M), t);
}

std::vector<Complex> circle_points(std::size_t count, double radius) {
    std::vector<Complex> pts;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
        pts.push_back(std::polar(radius, theta));
    }
    return pts;
}

std::vector<Complex> reconstruct_phi(const ComplexMatrix& A, const ComplexMatrix& C, const BlaschkeProduct& phi,
                                     std::span<const Complex> sample_points, const Tolerances& t) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || C.rows() != 1 || C.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "reconstruct_phi needs A n x n and C 1 x n");
    }
    const double defect_gap = op_norm(identity(n) - A.adjoint() * A - C.adjoint() * C);
    if (defect_gap > t.residual) {
        std::ostringstream msg;
        msg << "|I - A^*A - C^*C| = " << defect_gap;
        throw Error(ErrorKind::PreconditionViolated, msg.str());
    }
    const ComplexMatrix P = phi_of_matrix(phi, A.adjoint());
    if (n == 0) throw Error(ErrorKind::NoUnitEigenvector, "empty state space");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(P.adjoint() * P));
    const double top = es.eigenvalues()(n - 1);
    if (top < 1.0 - t.eig_one) {
        std::ostringstream msg;
        msg << "largest eigenvalue of phi(A^*)^* phi(A^*) is " << top;
        throw Error(ErrorKind::NoUnitEigenvector, msg.str());
    }
    const ComplexVector x = es.eigenvectors().col(n - 1);
    const ComplexVector px = P * x;

    std::vector<Complex> values;
    values.reserve(sample_points.size());
    for (const Complex z : sample_points) {
        Eigen::PartialPivLU<ComplexMatrix> lu(identity(n) - z * A);
        const Complex den = (C * lu.solve(x))(0, 0);
        const Complex num = (C * lu.solve(px))(0, 0);
        if (std::abs(den) < 1e-12) {
            std::ostringstream msg;
            msg << "C (I - zA)^{-1} x vanishes at z = " << z;
            throw Error(ErrorKind::ZeroDenominator, msg.str());
        }
        values.push_back(num / den);
    }
    return values;
}

IndexReport scalar_index_report(const BlaschkeProduct& phi, const BlaschkeProduct& m) {
    phi.check();
    m.check();
    const long index = static_cast<long>(phi.degree()) - static_cast<long>(m.degree());
    IndexReport rep;
    rep.m = 1;
    if (index < 0) {
        rep.negative_indices.push_back(static_cast<int>(index));
    } else if (index > 0) {
        rep.positive_indices.push_back(static_cast<int>(index));
    } else {
        rep.zero_count = 1;
    }
    rep.n_TR = static_cast<std::size_t>(std::max(-index, 0L));
    rep.d_TR = static_cast<std::size_t>(std::max(index, 0L));
    rep.kernel_dims = dims_from_indices(rep.n_TR > 0 ? std::vector<int>{static_cast<int>(rep.n_TR)}
                                                     : std::vector<int>{});
    rep.cokernel_dims = dims_from_indices(rep.d_TR > 0 ? std::vector<int>{static_cast<int>(rep.d_TR)}
                                                       : std::vector<int>{});
    rep.mu = indices_from_dims(rep.kernel_dims).mu;
    rep.nu = indices_from_dims(rep.cokernel_dims).mu;
    rep.fredholm_index = -index;
    rep.index_sum = index;
    rep.state_dim_difference = index;
    return rep;
}

}  // namespace whidx
