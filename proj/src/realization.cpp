#include "whidx/realization.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "whidx/blaschke.hpp"

namespace whidx {

void Realization::check_dimensions() const {
    const Eigen::Index n = A.rows();
    const Eigen::Index m = D.rows();
    std::ostringstream msg;
    if (A.cols() != n) {
        msg << "A is " << A.rows() << "x" << A.cols() << ", expected square";
    } else if (D.cols() != m || m < 1) {
        msg << "D is " << D.rows() << "x" << D.cols() << ", expected square with m >= 1";
    } else if (B.rows() != n || B.cols() != m) {
        msg << "B is " << B.rows() << "x" << B.cols() << ", expected " << n << "x" << m;
    } else if (C.rows() != m || C.cols() != n) {
        msg << "C is " << C.rows() << "x" << C.cols() << ", expected " << m << "x" << n;
    } else {
        return;
    }
    throw Error(ErrorKind::DimensionMismatch, msg.str());
}

ComplexMatrix Realization::systems_operator() const {
    check_dimensions();
    const Eigen::Index n = state_dim();
    const Eigen::Index m = io_dim();
    ComplexMatrix T(n + m, n + m);
    T.topLeftCorner(n, n) = A;
    T.topRightCorner(n, m) = B;
    T.bottomLeftCorner(m, n) = C;
    T.bottomRightCorner(m, m) = D;
    return T;
}

ValidationReport validate(const Realization& r, const Tolerances& t) {
    const ComplexMatrix T = r.systems_operator();
    const ComplexMatrix I = identity(T.rows());
    ValidationReport rep;
    rep.left_residual = op_norm(T.adjoint() * T - I);
    rep.right_residual = op_norm(T * T.adjoint() - I);
    rep.spectral_radius = spectral_radius(r.A);
    rep.passed = rep.left_residual <= t.residual && rep.right_residual <= t.residual &&
                 rep.spectral_radius < 1.0;
    rep.margin_warning = rep.spectral_radius > 1.0 - 1e-6;
    return rep;
}

ComplexMatrix evaluate(const Realization& r, Complex z) {
    r.check_dimensions();
    const Eigen::Index n = r.state_dim();
    if (n == 0) return r.D;
    const ComplexMatrix M = identity(n) - z * r.A;
    Eigen::PartialPivLU<ComplexMatrix> lu(M);
    if (!(lu.rcond() > 1e-13)) {
        std::ostringstream msg;
        msg << "I - zA is numerically singular at z = " << z;
        throw Error(ErrorKind::SingularResolvent, msg.str());
    }
    return r.D + z * r.C * lu.solve(r.B);
}

ComplexMatrix taylor_coefficient(const Realization& r, std::size_t k) {
    r.check_dimensions();
    if (k == 0) return r.D;
    return r.C * matrix_power(r.A, k - 1) * r.B;
}

std::vector<ComplexMatrix> taylor_coefficients(const Realization& r, std::size_t count) {
    r.check_dimensions();
    std::vector<ComplexMatrix> out;
    out.reserve(count);
    if (count == 0) return out;
    out.push_back(r.D);
    ComplexMatrix AkB = r.B;  // A^{k-1} B
    for (std::size_t k = 1; k < count; ++k) {
        out.push_back(r.C * AkB);
        AkB = r.A * AkB;
    }
    return out;
}

Realization tilde(const Realization& r) {
    return Realization{r.A.adjoint(), r.C.adjoint(), r.B.adjoint(), r.D.adjoint()};
}

Realization constant_realization(const ComplexMatrix& D) {
    const Eigen::Index m = D.rows();
    return Realization{ComplexMatrix(0, 0), ComplexMatrix(0, m), ComplexMatrix(m, 0), D};
}

Realization monomial_realization(std::size_t n) {
    if (n == 0) return constant_realization(identity(1));
    const auto N = static_cast<Eigen::Index>(n);
    Realization r;
    r.A = ComplexMatrix::Zero(N, N);
    r.A.diagonal(1).setOnes();
    r.B = ComplexMatrix::Zero(N, 1);
    r.B(N - 1, 0) = 1.0;
    r.C = ComplexMatrix::Zero(1, N);
    r.C(0, 0) = 1.0;
    r.D = ComplexMatrix::Zero(1, 1);
    return r;
}

namespace {

Realization blaschke_section(Complex alpha, Complex zeta) {
    const double s = std::sqrt(1.0 - std::norm(alpha));
    Realization r;
    r.A = ComplexMatrix::Constant(1, 1, std::conj(alpha));
    r.B = ComplexMatrix::Constant(1, 1, s);
    r.C = ComplexMatrix::Constant(1, 1, zeta * s);
    r.D = ComplexMatrix::Constant(1, 1, -zeta * alpha);
    return r;
}

}  // namespace

Realization blaschke_realization(const BlaschkeProduct& b) {
    b.check();
    Realization r = constant_realization(ComplexMatrix::Constant(1, 1, b.zeta));
    // The unimodular constant rides on the outermost factor.
    for (const Complex alpha : b.zeros) {
        r = cascade(r, blaschke_section(alpha, 1.0));
    }
    return r;
}

Realization cascade(const Realization& outer, const Realization& inner) {
    outer.check_dimensions();
    inner.check_dimensions();
    if (outer.io_dim() != inner.io_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "cascade needs equal input/output dimensions");
    }
    const Eigen::Index n1 = outer.state_dim();
    const Eigen::Index n2 = inner.state_dim();
    const Eigen::Index m = outer.io_dim();
    // Input drives the inner system; its output drives the outer one.
    Realization r;
    r.A = ComplexMatrix::Zero(n1 + n2, n1 + n2);
    r.A.topLeftCorner(n1, n1) = outer.A;
    r.A.topRightCorner(n1, n2) = outer.B * inner.C;
    r.A.bottomRightCorner(n2, n2) = inner.A;
    r.B = ComplexMatrix(n1 + n2, m);
    r.B.topRows(n1) = outer.B * inner.D;
    r.B.bottomRows(n2) = inner.B;
    r.C = ComplexMatrix(m, n1 + n2);
    r.C.leftCols(n1) = outer.C;
    r.C.rightCols(n2) = outer.D * inner.C;
    r.D = outer.D * inner.D;
    return r;
}

Realization diag_inner(std::span<const Realization> entries) {
    const auto m = static_cast<Eigen::Index>(entries.size());
    if (m == 0) throw Error(ErrorKind::DimensionMismatch, "diag_inner needs at least one entry");
    Eigen::Index n = 0;
    for (const auto& e : entries) {
        e.check_dimensions();
        if (e.io_dim() != 1) throw Error(ErrorKind::DimensionMismatch, "diag_inner entries must be scalar");
        n += e.state_dim();
    }
    Realization r{ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, m), ComplexMatrix::Zero(m, n),
                  ComplexMatrix::Zero(m, m)};
    Eigen::Index offset = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto& e = entries[static_cast<std::size_t>(j)];
        const Eigen::Index nj = e.state_dim();
        r.A.block(offset, offset, nj, nj) = e.A;
        r.B.block(offset, j, nj, 1) = e.B;
        r.C.block(j, offset, 1, nj) = e.C;
        r.D(j, j) = e.D(0, 0);
        offset += nj;
    }
    return r;
}

Realization state_transform(const Realization& r, const ComplexMatrix& U) {
    return Realization{U * r.A * U.adjoint(), U * r.B, r.C * U.adjoint(), r.D};
}

namespace {

ComplexMatrix haar_unitary(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix G(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) G(i, j) = Complex(normal(rng), normal(rng));
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(G);
    ComplexMatrix Q = qr.householderQ() * identity(n);
    const ComplexMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(R(j, j));
        if (a > 0.0) Q.col(j) *= R(j, j) / a;
    }
    return Q;
}

}  // namespace

ComplexMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return haar_unitary(n, rng);
}

Realization random_realization(Eigen::Index n, Eigen::Index m, std::uint64_t seed, double max_radius) {
    if (m < 1 || n < 0) throw Error(ErrorKind::DimensionMismatch, "random_realization needs n >= 0, m >= 1");
    std::mt19937_64 rng(seed);
    // Pieces with state dimension at most m keep rejection cheap; the
    // cascade's state matrix is block triangular, so its spectrum is the
    // union of the pieces' spectra.
    Realization acc = constant_realization(haar_unitary(m, rng));
    for (Eigen::Index left = n; left > 0;) {
        const Eigen::Index k = std::min(left, m);
        bool drawn = false;
        for (int attempt = 0; attempt < 10000 && !drawn; ++attempt) {
            const ComplexMatrix T = haar_unitary(k + m, rng);
            Realization piece{T.topLeftCorner(k, k), T.topRightCorner(k, m), T.bottomLeftCorner(m, k),
                              T.bottomRightCorner(m, m)};
            if (spectral_radius(piece.A) <= max_radius) {
                acc = cascade(acc, piece);
                drawn = true;
            }
        }
        if (!drawn) throw Error(ErrorKind::PreconditionViolated, "could not draw a realization within the radius bound");
        left -= k;
    }
    return state_transform(acc, haar_unitary(n, rng));
}

}  // namespace whidx
