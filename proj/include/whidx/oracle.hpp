#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "whidx/realization.hpp"

namespace whidx {

/// Finite block section of a Toeplitz or Hankel operator.
struct TruncationProbe {
    Eigen::Index block_size = 0;
    std::size_t levels = 0;     ///< number of block rows and columns
    ComplexMatrix matrix;       ///< (levels * m) x (levels * m)
    double tail_bound = 0.0;    ///< bound on the summed norms of discarded coefficients
};

/// Upper bound on sum_{k >= K} |Theta_k| for K >= 1. A stretch of terms is
/// summed exactly and the remainder bounded through a power of A with norm
/// at most 1/2; exactly zero once A^{K-1} vanishes.
double coefficient_tail(const Realization& r, std::size_t K);

/// Fourier coefficients of R = V W^* on the unit circle, in closed form
/// from the realizations and Omega. Coefficients are cached as requested.
class SymbolCoefficients {
public:
    SymbolCoefficients(const Realization& V, const Realization& W, const Tolerances& t = {});

    /// R_n for any integer n.
    const ComplexMatrix& at(long n);

    Eigen::Index block_size() const { return m_; }

private:
    Eigen::Index m_;
    ComplexMatrix Cv_, Av_, Aw_h_, Cw_h_;
    ComplexMatrix pos_tail_;  // B_v D_w^* + A_v Omega C_w^*
    ComplexMatrix neg_head_;  // C_o
    ComplexMatrix left_pos_;  // C_v A_v^{k}, advanced as positive indices are filled
    ComplexMatrix left_neg_;  // C_o A_w^{*k}
    std::vector<ComplexMatrix> nonneg_;  // R_0, R_1, ...
    std::vector<ComplexMatrix> neg_;     // R_{-1}, R_{-2}, ...
};

/// R_n by closed form.
ComplexMatrix fourier_R(const Realization& V, const Realization& W, long n, const Tolerances& t = {});

/// R_n by the truncated convolution sum_k V_{n+k} W_k^* over `terms` terms;
/// an independent route used to check the closed form.
ComplexMatrix fourier_R_series(const Realization& V, const Realization& W, long n, std::size_t terms);

using CoefficientFn = std::function<ComplexMatrix(long)>;

/// Section with block (i, j) = coeffs(i - j), i, j < N.
TruncationProbe truncated_toeplitz(const CoefficientFn& coeffs, Eigen::Index m, std::size_t N,
                                   double tail_bound = 0.0);

/// Lower-triangular section of T_Theta.
TruncationProbe truncated_toeplitz(const Realization& r, std::size_t N);

/// Section of H_Theta, block (i, j) = Theta_{i+j+1}.
TruncationProbe truncated_hankel(const Realization& r, std::size_t N);

/// dim ker of the (2N x N)-block section of T_{z^k R}. The extra block rows
/// keep positive indices from masquerading as kernel.
std::size_t section_kernel_dim(SymbolCoefficients& coeffs, std::size_t k, std::size_t N, const Tolerances& t = {});
std::size_t section_kernel_dim(const Realization& V, const Realization& W, std::size_t k, std::size_t N,
                               const Tolerances& t = {});

struct OracleResult {
    std::vector<std::size_t> dims;           ///< stabilized dim ker T_{z^k R}, k = 0..k_max
    std::vector<std::size_t> stabilized_at;  ///< section size at which each value settled
};

/// Estimates dim ker T_{z^k R} for k = 0..k_max from sections of growing
/// size N0, N0 + D, N0 + 2D, ... (D = dim X_v + dim X_w) until two
/// consecutive sizes agree. Throws NoStabilization past `n_max`
/// (default 16 (dim X_v + dim X_w + k_max)).
OracleResult oracle_kernel_dims(const Realization& V, const Realization& W, std::size_t k_max,
                                const Tolerances& t = {}, std::optional<std::size_t> n_max = std::nullopt);

struct DecompositionReport {
    double residual = 0.0;  ///< max block norm of T_R - (T_V T_W^* + H_V H_W^*) on the section
    double bound = 0.0;     ///< truncation bound for the Hankel product
    std::size_t levels = 0;
    bool passed = false;
};

/// T_R = T_V T_W^* + H_V H_W^* on an N-block section.
DecompositionReport verify_decomposition(const Realization& V, const Realization& W, std::size_t N,
                                         const Tolerances& t = {});

struct AppendixReport {
    double coisometry_residual = 0.0;  ///< T T^* + H H^* - I
    double coisometry_bound = 0.0;
    double isometry_residual = 0.0;    ///< T^* T - I on the leading half
    double isometry_bound = 0.0;
    double tilde_residual = 0.0;       ///< H~ H~^* - (I - T~ T~^*)
    double tilde_bound = 0.0;
    std::size_t levels = 0;
    std::size_t isometry_levels = 0;
    bool passed = false;
};

/// Coisometry of [H_Theta  T_Theta], isometry of T_Theta, and the same
/// projection identity for the tilde function, on N-block sections.
AppendixReport verify_appendix(const Realization& r, std::size_t N, const Tolerances& t = {});

/// Largest spectral norm over the m x m blocks of M.
double max_block_norm(const ComplexMatrix& M, Eigen::Index m);

}  // namespace whidx
