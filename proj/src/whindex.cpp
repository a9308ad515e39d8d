#include "whidx/whindex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "whidx/stein.hpp"

namespace whidx {

std::vector<int> IndexReport::all_indices() const {
    std::vector<int> out(negative_indices);
    out.insert(out.end(), zero_count, 0);
    out.insert(out.end(), positive_indices.begin(), positive_indices.end());
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void require_same_io(const Realization& V, const Realization& W) {
    V.check_dimensions();
    W.check_dimensions();
    if (V.io_dim() != W.io_dim()) {
        std::ostringstream msg;
        msg << "V is " << V.io_dim() << "x" << V.io_dim() << " but W is " << W.io_dim() << "x" << W.io_dim();
        throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
}

}  // namespace

ComplexMatrix coupling_omega(const Realization& V, const Realization& W, const Tolerances& t) {
    require_same_io(V, W);
    return solve_stein(V.A, W.A, V.B * W.B.adjoint(), t);
}

ComplexMatrix c_circ(const Realization& V, const Realization& W, const ComplexMatrix& Omega) {
    require_same_io(V, W);
    if (Omega.rows() != V.state_dim() || Omega.cols() != W.state_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "Omega must be dim X_v x dim X_w");
    }
    return V.D * W.B.adjoint() + V.C * Omega * W.A.adjoint();
}

ComplexMatrix gram_q(const Realization& W, const ComplexMatrix& Ccirc, const Tolerances& t) {
    W.check_dimensions();
    if (Ccirc.rows() != W.io_dim() || Ccirc.cols() != W.state_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "C_o must be m x dim X_w");
    }
    return hermitian_part(solve_stein(W.A, W.A, Ccirc.adjoint() * Ccirc, t));
}

KernelSequence kernel_dim_sequence(const ComplexMatrix& A, const ComplexMatrix& Q, const Tolerances& t) {
    if (A.rows() != A.cols() || Q.rows() != A.rows() || Q.cols() != A.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "kernel_dim_sequence needs square A and Q of equal size");
    }
    const auto cap = static_cast<std::size_t>(A.rows()) + 1;
    KernelSequence seq;
    ComplexMatrix M = Q;  // A^k Q A^{*k}
    for (std::size_t k = 0; k <= cap; ++k) {
        const RealVector ev = hermitian_eigenvalues(M, t);
        std::size_t count = 0;
        std::optional<double> gap;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev(i) >= 1.0 - t.eig_one) {
                ++count;
            } else {
                gap = gap ? std::max(*gap, ev(i)) : ev(i);
            }
        }
        if (!seq.dims.empty() && count > seq.dims.back()) {
            std::ostringstream msg;
            msg << "n_" << k << " = " << count << " exceeds n_" << k - 1 << " = " << seq.dims.back();
            throw Error(ErrorKind::NonMonotone, msg.str());
        }
        seq.dims.push_back(count);
        seq.gaps.push_back(gap);
        if (count == 0) return seq;
        M = A * M * A.adjoint();
    }
    throw Error(ErrorKind::NonMonotone, "kernel dimensions did not reach zero within dim + 1 steps");
}

PartitionData indices_from_dims(const std::vector<std::size_t>& dims) {
    if (dims.empty() || dims.back() != 0) {
        throw Error(ErrorKind::MalformedSequence, "kernel dimension sequence must end at 0");
    }
    PartitionData out;
    for (std::size_t k = 1; k < dims.size(); ++k) {
        if (dims[k] > dims[k - 1]) {
            std::ostringstream msg;
            msg << "sequence increases at position " << k;
            throw Error(ErrorKind::MalformedSequence, msg.str());
        }
        out.mu.push_back(dims[k - 1] - dims[k]);
        if (out.mu.size() > 1 && out.mu.back() > out.mu[out.mu.size() - 2]) {
            std::ostringstream msg;
            msg << "differences increase at position " << k << "; not a kernel dimension sequence";
            throw Error(ErrorKind::MalformedSequence, msg.str());
        }
    }
    // kappa_j = #{k : mu_k >= j}.
    const std::size_t p = out.mu.empty() ? 0 : *std::max_element(out.mu.begin(), out.mu.end());
    for (std::size_t j = 1; j <= p; ++j) {
        const auto c = std::count_if(out.mu.begin(), out.mu.end(), [j](std::size_t v) { return v >= j; });
        out.indices.push_back(static_cast<int>(c));
    }
    return out;
}

std::vector<std::size_t> dims_from_indices(const std::vector<int>& kappa) {
    const int top = kappa.empty() ? 0 : *std::max_element(kappa.begin(), kappa.end());
    std::vector<std::size_t> dims;
    for (int k = 0; k <= top; ++k) {
        std::size_t n = 0;
        for (const int c : kappa) n += static_cast<std::size_t>(std::max(c - k, 0));
        dims.push_back(n);
    }
    return dims;
}

DualResult dual_pipeline(const Realization& V, const Realization& W, const Tolerances& t) {
    require_same_io(V, W);
    DualResult out;
    out.omega_star = solve_stein(W.A, V.A, W.B * V.B.adjoint(), t);
    const ComplexMatrix omega = coupling_omega(V, W, t);
    out.omega_star_mismatch = op_norm(out.omega_star - omega.adjoint());
    out.c_circ_star = W.D * V.B.adjoint() + W.C * out.omega_star * V.A.adjoint();
    out.q_star = hermitian_part(solve_stein(V.A, V.A, out.c_circ_star.adjoint() * out.c_circ_star, t));
    out.cokernel = kernel_dim_sequence(V.A, out.q_star, t);
    PartitionData pd = indices_from_dims(out.cokernel.dims);
    out.nu = std::move(pd.mu);
    out.positive_indices = std::move(pd.indices);
    return out;
}

IndexReport full_report(const Realization& V, const Realization& W, const Tolerances& t) {
    require_same_io(V, W);
    t.check();
    IndexReport rep;
    auto& diag = rep.diagnostics;
    rep.m = static_cast<std::size_t>(V.io_dim());

    const ComplexMatrix omega = coupling_omega(V, W, t);
    const ComplexMatrix cc = c_circ(V, W, omega);
    const ComplexMatrix Q = gram_q(W, cc, t);
    diag.omega_residual = stein_residual(V.A, W.A, V.B * W.B.adjoint(), omega);
    diag.q_residual = stein_residual(W.A, W.A, cc.adjoint() * cc, Q);
    diag.q_identity_residual = op_norm(Q - (identity(W.state_dim()) - omega.adjoint() * omega));
    diag.stein_conditioning = std::max(stein_conditioning(V.A, W.A), stein_conditioning(W.A, W.A));
    const RealVector qev = hermitian_eigenvalues(Q, t);
    if (qev.size() > 0) {
        diag.q_min_eigenvalue = qev(0);
        diag.q_max_eigenvalue = qev(qev.size() - 1);
        if (diag.q_min_eigenvalue < -t.residual || diag.q_max_eigenvalue > 1.0 + t.residual) {
            diag.warnings.push_back("Q is not a positive contraction within the residual tolerance");
        }
    }
    if (diag.q_identity_residual > t.residual) {
        diag.warnings.push_back("Q differs from I - Omega^* Omega beyond the residual tolerance");
    }

    KernelSequence seq = kernel_dim_sequence(W.A, Q, t);
    PartitionData neg = indices_from_dims(seq.dims);
    DualResult dual = dual_pipeline(V, W, t);
    diag.omega_star_mismatch = dual.omega_star_mismatch;
    if (dual.omega_star_mismatch > t.residual) {
        diag.warnings.push_back("Omega_* disagrees with Omega^*; Stein solver health is suspect");
    }

    rep.kernel_dims = std::move(seq.dims);
    diag.kernel_gaps = std::move(seq.gaps);
    rep.mu = std::move(neg.mu);
    rep.cokernel_dims = std::move(dual.cokernel.dims);
    diag.cokernel_gaps = std::move(dual.cokernel.gaps);
    rep.nu = std::move(dual.nu);
    for (const int k : neg.indices) rep.negative_indices.push_back(-k);
    std::sort(rep.negative_indices.begin(), rep.negative_indices.end());
    rep.positive_indices = std::move(dual.positive_indices);

    const std::size_t p = rep.negative_indices.size();
    const std::size_t q = rep.positive_indices.size();
    if (p + q > rep.m) {
        std::ostringstream msg;
        msg << p << " negative and " << q << " positive indices exceed m = " << rep.m
            << "; inspect the eigenvalue gaps near the unit cutoff";
        throw Error(ErrorKind::InconsistentIndexCount, msg.str());
    }
    rep.zero_count = rep.m - p - q;
    rep.n_TR = rep.kernel_dims.front();
    rep.d_TR = static_cast<std::size_t>(
        std::accumulate(rep.positive_indices.begin(), rep.positive_indices.end(), 0L));
    rep.fredholm_index = static_cast<long>(rep.n_TR) - static_cast<long>(rep.d_TR);
    rep.index_sum = -rep.fredholm_index;
    rep.state_dim_difference = static_cast<long>(V.state_dim()) - static_cast<long>(W.state_dim());
    if (rep.index_sum != rep.state_dim_difference) {
        diag.warnings.push_back("sum of indices differs from dim X_v - dim X_w");
    }
    return rep;
}

std::vector<std::size_t> kernel_chain_dims(const Realization& V, const Realization& W, std::size_t k_max,
                                           const Tolerances& t) {
    require_same_io(V, W);
    const ComplexMatrix X = coupling_omega(V, W, t);
    const Eigen::Index nv = V.state_dim();
    const Eigen::Index nw = W.state_dim();
    const Eigen::Index m = W.io_dim();
    const ComplexMatrix Aw_h = W.A.adjoint();

    ComplexMatrix G(m + nv, nw);
    G.topRows(m) = W.B.adjoint();
    G.bottomRows(nv) = X * Aw_h;

    // X and the stacked operators are contractions, so cutoffs are taken
    // against unit scale rather than their own largest singular value.
    std::vector<std::size_t> dims;
    dims.push_back(static_cast<std::size_t>(kernel_basis(X, t, 1.0).cols()));
    ComplexMatrix stack(0, nw);
    ComplexMatrix block = G;  // G A_w^{*j}
    for (std::size_t k = 1; k <= k_max; ++k) {
        ComplexMatrix grown(stack.rows() + block.rows(), nw);
        grown.topRows(stack.rows()) = stack;
        grown.bottomRows(block.rows()) = block;
        stack = std::move(grown);
        dims.push_back(static_cast<std::size_t>(kernel_basis(stack, t, 1.0).cols()));
        block = block * Aw_h;
    }
    return dims;
}

}  // namespace whidx
