#pragma once

#include <cstddef>

#include "whidx/numerics.hpp"

namespace whidx {

enum class SteinStrategy {
    Auto,    ///< Direct up to kDirectSteinLimit unknowns, series above.
    Direct,  ///< Vectorized (I - conj(A2) (x) A1) vec(S) = vec(R).
    Series,  ///< Accumulated sum of A1^k R A2^{*k}.
};

inline constexpr std::size_t kDirectSteinLimit = 4096;

/// Unique solution S of S = A1 S A2^* + R for rho(A1) rho(A2) < 1.
/// Throws UnstablePair when rho(A1) rho(A2) >= 1 - 1e-12, DimensionMismatch
/// on inconsistent shapes.
ComplexMatrix solve_stein(const ComplexMatrix& A1, const ComplexMatrix& A2, const ComplexMatrix& R,
                          const Tolerances& t = {}, SteinStrategy strategy = SteinStrategy::Auto);

/// 1 / (1 - rho(A1) rho(A2)); grows as the pair approaches the unit circle.
double stein_conditioning(const ComplexMatrix& A1, const ComplexMatrix& A2);

/// |S - A1 S A2^* - R|.
double stein_residual(const ComplexMatrix& A1, const ComplexMatrix& A2, const ComplexMatrix& R,
                      const ComplexMatrix& S);

}  // namespace whidx
