#pragma once

#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sorient {

struct SvdOptions {
    /// Converged when, for every retained triplet, the singular value moved
    /// by at most this fraction since the previous check and its residual
    /// ||X^T u - sigma v|| is at most tolerance * sigma_1.
    double tolerance = 1e-10;
    /// Cap on Lanczos steps.
    int max_iterations = 1000;
    /// Seeds the start vector and any restart vectors.
    std::uint64_t seed = 0x5EED5EEDULL;
};

/// Top singular triplets X ~ U diag(sigma) V^T.
struct TruncatedSvd {
    Eigen::MatrixXd u;      // rows(X) x k, orthonormal columns
    Eigen::VectorXd sigma;  // k values, non-increasing, positive
    Eigen::MatrixXd v;      // cols(X) x k, orthonormal columns
    /// Set when fewer than the requested k numerically nonzero singular
    /// values exist; k then equals the numerical rank.
    bool rank_deficient = false;
    int requested_k = 0;
    int lanczos_steps = 0;

    int k() const noexcept { return static_cast<int>(sigma.size()); }
    Eigen::MatrixXd reconstruct() const { return u * sigma.asDiagonal() * v.transpose(); }
};

/// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization.
/// Each left singular vector is oriented so its largest-magnitude entry is
/// positive (first such entry on ties), with the right vector flipped to match.
///
/// Throws InvalidConfig unless 1 <= k <= min(rows, cols), DegenerateMatrix
/// for an all-zero matrix, and ConvergenceFailure when max_iterations steps
/// do not reach the tolerance.
TruncatedSvd truncated_svd(const Eigen::SparseMatrix<double>& x, int k, const SvdOptions& options = {});
TruncatedSvd truncated_svd(const Eigen::MatrixXd& x, int k, const SvdOptions& options = {});

}  // namespace sorient
