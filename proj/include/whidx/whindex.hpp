#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "whidx/realization.hpp"

namespace whidx {

/// Numbers a caller can audit after the fact; none of them change a result.
struct IndexDiagnostics {
    double omega_residual = 0.0;       ///< Stein residual of Omega
    double q_residual = 0.0;           ///< Stein residual of Q
    double q_identity_residual = 0.0;  ///< |Q - (I - Omega^* Omega)|
    double omega_star_mismatch = 0.0;  ///< |Omega_* - Omega^*|
    double q_min_eigenvalue = 0.0;
    double q_max_eigenvalue = 0.0;
    double stein_conditioning = 1.0;
    /// Largest eigenvalue below the unit cutoff for each k (absent when the
    /// spectrum is entirely at 1).
    std::vector<std::optional<double>> kernel_gaps;
    std::vector<std::optional<double>> cokernel_gaps;
    std::vector<std::string> warnings;
};

/// Complete Wiener-Hopf index structure of R = V W^*.
struct IndexReport {
    std::size_t m = 0;
    std::vector<int> negative_indices;  ///< -kappa_1 <= -kappa_2 <= ... < 0
    std::vector<int> positive_indices;  ///< omega_1 >= omega_2 >= ... > 0
    std::size_t zero_count = 0;
    std::vector<std::size_t> kernel_dims;    ///< n_k = dim ker(I - A_w^k Q A_w^{*k})
    std::vector<std::size_t> cokernel_dims;  ///< same for Q_* and A_v
    std::vector<std::size_t> mu;
    std::vector<std::size_t> nu;
    std::size_t n_TR = 0;  ///< dim ker T_R
    std::size_t d_TR = 0;  ///< codim ran T_R
    long fredholm_index = 0;
    long index_sum = 0;              ///< sum of all partial indices (winding number)
    long state_dim_difference = 0;   ///< dim X_v - dim X_w
    IndexDiagnostics diagnostics;

    /// All m indices in nondecreasing order, zeros included.
    std::vector<int> all_indices() const;
};

/// Omega = A_v Omega A_w^* + B_v B_w^*.
ComplexMatrix coupling_omega(const Realization& V, const Realization& W, const Tolerances& t = {});

/// C_o = D_v B_w^* + C_v Omega A_w^*.
ComplexMatrix c_circ(const Realization& V, const Realization& W, const ComplexMatrix& Omega);

/// Q = A_w Q A_w^* + C_o^* C_o, returned exactly Hermitian.
ComplexMatrix gram_q(const Realization& W, const ComplexMatrix& Ccirc, const Tolerances& t = {});

struct KernelSequence {
    std::vector<std::size_t> dims;             ///< n_0, n_1, ..., ending at the first 0
    std::vector<std::optional<double>> gaps;   ///< see IndexDiagnostics::kernel_gaps
};

/// n_k = multiplicity of 1 as an eigenvalue of A^k Q A^{*k}, k = 0, 1, ...,
/// stopping at the first zero; at most dim + 1 steps. Throws NonMonotone.
KernelSequence kernel_dim_sequence(const ComplexMatrix& A, const ComplexMatrix& Q, const Tolerances& t = {});

struct PartitionData {
    std::vector<int> indices;      ///< kappa_j, nonincreasing, all >= 1
    std::vector<std::size_t> mu;   ///< mu_k = n_{k-1} - n_k
};

/// Conjugate-partition transform of a nonincreasing sequence ending at 0
/// whose differences are nonincreasing. Throws MalformedSequence otherwise.
PartitionData indices_from_dims(const std::vector<std::size_t>& dims);

/// Inverse transform: kernel dims n_k = sum_j max(kappa_j - k, 0), k = 0..kappa_1.
std::vector<std::size_t> dims_from_indices(const std::vector<int>& kappa);

struct DualResult {
    ComplexMatrix omega_star;
    ComplexMatrix c_circ_star;
    ComplexMatrix q_star;
    KernelSequence cokernel;
    std::vector<std::size_t> nu;
    std::vector<int> positive_indices;
    double omega_star_mismatch = 0.0;
};

/// Positive indices via the adjoint orientation: Omega_*, C_o*, Q_*, nu, omega_j.
DualResult dual_pipeline(const Realization& V, const Realization& W, const Tolerances& t = {});

/// Throws InconsistentIndexCount when the counted indices exceed m.
IndexReport full_report(const Realization& V, const Realization& W, const Tolerances& t = {});

/// Kernel-chain method: entry k is dim of the common kernel of
/// [B_w^*; X A_w^*] A_w^{*j}, j < k (entry 0 is dim ker X), k = 0..k_max.
std::vector<std::size_t> kernel_chain_dims(const Realization& V, const Realization& W, std::size_t k_max,
                                           const Tolerances& t = {});

}  // namespace whidx
