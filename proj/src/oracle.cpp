#include "whidx/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "whidx/whindex.hpp"

namespace whidx {

namespace {

// Round-off allowance added to every rigorous truncation bound.
constexpr double kRoundoffSlack = 1e-10;

// Terms summed exactly before the geometric remainder bound takes over.
constexpr std::size_t kExactTailTerms = 64;

}  // namespace

double coefficient_tail(const Realization& r, std::size_t K) {
    r.check_dimensions();
    if (K == 0) throw Error(ErrorKind::PreconditionViolated, "coefficient_tail needs K >= 1");
    const Eigen::Index n = r.state_dim();
    if (n == 0) return 0.0;

    // Exact part: sum_{k=K}^{K+L-1} |C A^{k-1} B|.
    ComplexMatrix AkB = matrix_power(r.A, K - 1) * r.B;
    double exact = 0.0;
    for (std::size_t i = 0; i < kExactTailTerms; ++i) {
        exact += op_norm(r.C * AkB);
        AkB = r.A * AkB;
    }
    const ComplexMatrix AJ = matrix_power(r.A, K - 1 + kExactTailTerms);
    const double head = op_norm(AJ);
    if (head == 0.0) return exact;

    // |A^{J + qs + p}| <= |A^J| |A^s|^q max_{p<s} |A^p|.
    ComplexMatrix P = identity(n);
    double max_prefix = 1.0;
    for (std::size_t s = 1; s <= 4096; ++s) {
        P = P * r.A;
        const double ps = op_norm(P);
        if (ps <= 0.5) {
            const double remainder = op_norm(r.C) * op_norm(r.B) * head * static_cast<double>(s) * max_prefix /
                                     (1.0 - ps);
            return exact + remainder;
        }
        max_prefix = std::max(max_prefix, ps);
    }
    return std::numeric_limits<double>::infinity();
}

SymbolCoefficients::SymbolCoefficients(const Realization& V, const Realization& W, const Tolerances& t)
    : m_(V.io_dim()) {
    const ComplexMatrix omega = coupling_omega(V, W, t);
    Cv_ = V.C;
    Av_ = V.A;
    Aw_h_ = W.A.adjoint();
    Cw_h_ = W.C.adjoint();
    pos_tail_ = V.B * W.D.adjoint() + V.A * omega * Cw_h_;
    neg_head_ = c_circ(V, W, omega);
    left_pos_ = Cv_;
    left_neg_ = neg_head_;
    nonneg_.push_back(V.D * W.D.adjoint() + V.C * omega * Cw_h_);
}

const ComplexMatrix& SymbolCoefficients::at(long n) {
    if (n >= 0) {
        const auto idx = static_cast<std::size_t>(n);
        while (nonneg_.size() <= idx) {
            // R_k = C_v A_v^{k-1} (B_v D_w^* + A_v Omega C_w^*)
            nonneg_.push_back(left_pos_ * pos_tail_);
            left_pos_ = left_pos_ * Av_;
        }
        return nonneg_[idx];
    }
    const auto idx = static_cast<std::size_t>(-n) - 1;
    while (neg_.size() <= idx) {
        // R_{-k} = C_o A_w^{*(k-1)} C_w^*
        neg_.push_back(left_neg_ * Cw_h_);
        left_neg_ = left_neg_ * Aw_h_;
    }
    return neg_[idx];
}

ComplexMatrix fourier_R(const Realization& V, const Realization& W, long n, const Tolerances& t) {
    SymbolCoefficients coeffs(V, W, t);
    return coeffs.at(n);
}

ComplexMatrix fourier_R_series(const Realization& V, const Realization& W, long n, std::size_t terms) {
    const std::size_t first = n < 0 ? static_cast<std::size_t>(-n) : 0;
    const std::vector<ComplexMatrix> Wk = taylor_coefficients(W, first + terms);
    const std::vector<ComplexMatrix> Vk =
        taylor_coefficients(V, static_cast<std::size_t>(std::max(n, 0L)) + first + terms);
    ComplexMatrix sum = ComplexMatrix::Zero(V.io_dim(), W.io_dim());
    for (std::size_t k = first; k < first + terms; ++k) {
        sum += Vk[static_cast<std::size_t>(n + static_cast<long>(k))] * Wk[k].adjoint();
    }
    return sum;
}

TruncationProbe truncated_toeplitz(const CoefficientFn& coeffs, Eigen::Index m, std::size_t N, double tail_bound) {
    if (N == 0) throw Error(ErrorKind::PreconditionViolated, "sections need N >= 1");
    const auto L = static_cast<Eigen::Index>(N);
    TruncationProbe p{m, N, ComplexMatrix(L * m, L * m), tail_bound};
    for (Eigen::Index d = -(L - 1); d <= L - 1; ++d) {
        const ComplexMatrix c = coeffs(static_cast<long>(d));
        for (Eigen::Index j = std::max<Eigen::Index>(0, -d); j < L && j + d < L; ++j) {
            p.matrix.block((j + d) * m, j * m, m, m) = c;
        }
    }
    return p;
}

TruncationProbe truncated_toeplitz(const Realization& r, std::size_t N) {
    const std::vector<ComplexMatrix> th = taylor_coefficients(r, N);
    const Eigen::Index m = r.io_dim();
    auto fn = [&th, m](long k) -> ComplexMatrix {
        return k < 0 ? ComplexMatrix::Zero(m, m) : th[static_cast<std::size_t>(k)];
    };
    return truncated_toeplitz(fn, m, N, coefficient_tail(r, std::max<std::size_t>(N, 1)));
}

TruncationProbe truncated_hankel(const Realization& r, std::size_t N) {
    if (N == 0) throw Error(ErrorKind::PreconditionViolated, "sections need N >= 1");
    const std::vector<ComplexMatrix> th = taylor_coefficients(r, 2 * N);
    const Eigen::Index m = r.io_dim();
    const auto L = static_cast<Eigen::Index>(N);
    TruncationProbe p{m, N, ComplexMatrix(L * m, L * m), coefficient_tail(r, N + 1)};
    for (Eigen::Index i = 0; i < L; ++i) {
        for (Eigen::Index j = 0; j < L; ++j) {
            p.matrix.block(i * m, j * m, m, m) = th[static_cast<std::size_t>(i + j + 1)];
        }
    }
    return p;
}

std::size_t section_kernel_dim(SymbolCoefficients& coeffs, std::size_t k, std::size_t N, const Tolerances& t) {
    if (N == 0) throw Error(ErrorKind::PreconditionViolated, "sections need N >= 1");
    const Eigen::Index m = coeffs.block_size();
    const auto cols = static_cast<Eigen::Index>(N);
    const Eigen::Index rows = 2 * cols;
    const auto shift = static_cast<long>(k);
    ComplexMatrix S(rows * m, cols * m);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            // (z^k R)_n = R_{n-k}
            S.block(i * m, j * m, m, m) = coeffs.at(static_cast<long>(i - j) - shift);
        }
    }
    return static_cast<std::size_t>(S.cols()) - rank_tol(S, t);
}

std::size_t section_kernel_dim(const Realization& V, const Realization& W, std::size_t k, std::size_t N,
                               const Tolerances& t) {
    SymbolCoefficients coeffs(V, W, t);
    return section_kernel_dim(coeffs, k, N, t);
}

OracleResult oracle_kernel_dims(const Realization& V, const Realization& W, std::size_t k_max, const Tolerances& t,
                                std::optional<std::size_t> n_max) {
    SymbolCoefficients coeffs(V, W, t);
    const auto dim_sum = static_cast<std::size_t>(V.state_dim() + W.state_dim());
    const std::size_t step = std::max<std::size_t>(dim_sum, 1);
    const std::size_t limit = n_max.value_or(16 * (dim_sum + k_max));

    // Start where the powers of both state maps have decayed below the rank
    // cutoff; before that, truncated kernel vectors cannot register as kernel.
    std::size_t start = step;
    {
        ComplexMatrix Pv = matrix_power(V.A, start);
        ComplexMatrix Pw = matrix_power(W.A, start);
        while (std::max(op_norm(Pv), op_norm(Pw)) > 0.1 * t.rank_rel) {
            if (start > limit) {
                std::ostringstream msg;
                msg << "state maps have not decayed by N = " << limit;
                throw Error(ErrorKind::NoStabilization, msg.str());
            }
            ++start;
            Pv = Pv * V.A;
            Pw = Pw * W.A;
        }
    }

    OracleResult out;
    for (std::size_t k = 0; k <= k_max; ++k) {
        std::size_t N = start;
        std::size_t prev = section_kernel_dim(coeffs, k, N, t);
        bool settled = false;
        for (N += step; N <= limit; N += step) {
            const std::size_t cur = section_kernel_dim(coeffs, k, N, t);
            if (cur == prev) {
                settled = true;
                break;
            }
            prev = cur;
        }
        if (!settled) {
            std::ostringstream msg;
            msg << "dim ker T_{z^" << k << " R} did not settle by N = " << limit;
            throw Error(ErrorKind::NoStabilization, msg.str());
        }
        out.dims.push_back(prev);
        out.stabilized_at.push_back(N);
    }
    return out;
}

double max_block_norm(const ComplexMatrix& M, Eigen::Index m) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i + m <= M.rows(); i += m) {
        for (Eigen::Index j = 0; j + m <= M.cols(); j += m) {
            worst = std::max(worst, op_norm(M.block(i, j, m, m)));
        }
    }
    return worst;
}

DecompositionReport verify_decomposition(const Realization& V, const Realization& W, std::size_t N,
                                         const Tolerances& t) {
    SymbolCoefficients coeffs(V, W, t);
    const Eigen::Index m = coeffs.block_size();
    const TruncationProbe TR =
        truncated_toeplitz([&coeffs](long n) { return coeffs.at(n); }, m, N);
    const TruncationProbe TV = truncated_toeplitz(V, N);
    const TruncationProbe TW = truncated_toeplitz(W, N);
    const TruncationProbe HV = truncated_hankel(V, N);
    const TruncationProbe HW = truncated_hankel(W, N);

    DecompositionReport rep;
    rep.levels = N;
    // T_V T_W^* is exact on sections (both triangular); the Hankel product
    // misses sum_{l >= N} V_{i+l+1} W_{j+l+1}^*, and |V_k|, |W_k| <= 1.
    rep.bound = std::min(HV.tail_bound, HW.tail_bound);
    const ComplexMatrix diff = TR.matrix - (TV.matrix * TW.matrix.adjoint() + HV.matrix * HW.matrix.adjoint());
    rep.residual = max_block_norm(diff, m);
    rep.passed = rep.residual <= rep.bound + kRoundoffSlack;
    return rep;
}

namespace {

// Max block norm of T T^* + H H^* - I and its truncation bound.
std::pair<double, double> coisometry_check(const Realization& r, std::size_t N) {
    const TruncationProbe T = truncated_toeplitz(r, N);
    const TruncationProbe H = truncated_hankel(r, N);
    const ComplexMatrix I = identity(T.matrix.rows());
    const ComplexMatrix diff = T.matrix * T.matrix.adjoint() + H.matrix * H.matrix.adjoint() - I;
    return {max_block_norm(diff, r.io_dim()), H.tail_bound};
}

}  // namespace

AppendixReport verify_appendix(const Realization& r, std::size_t N, const Tolerances& t) {
    (void)t;
    r.check_dimensions();
    AppendixReport rep;
    rep.levels = N;
    const Eigen::Index m = r.io_dim();

    std::tie(rep.coisometry_residual, rep.coisometry_bound) = coisometry_check(r, N);
    std::tie(rep.tilde_residual, rep.tilde_bound) = coisometry_check(tilde(r), N);

    // (T^* T)_{ij} drops terms with l >= N; on blocks i, j < N - d every
    // dropped coefficient has index above d.
    const std::size_t d = N / 2;
    rep.isometry_levels = N - d;
    const TruncationProbe T = truncated_toeplitz(r, N);
    const auto lead = static_cast<Eigen::Index>(rep.isometry_levels) * m;
    const ComplexMatrix gram = (T.matrix.adjoint() * T.matrix).topLeftCorner(lead, lead);
    rep.isometry_residual = max_block_norm(gram - identity(lead), m);
    rep.isometry_bound = coefficient_tail(r, d + 1);

    rep.passed = rep.coisometry_residual <= rep.coisometry_bound + kRoundoffSlack &&
                 rep.tilde_residual <= rep.tilde_bound + kRoundoffSlack &&
                 rep.isometry_residual <= rep.isometry_bound + kRoundoffSlack;
    return rep;
}

}  // namespace whidx
