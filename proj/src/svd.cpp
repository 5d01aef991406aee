#include "sorient/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sorient/error.hpp"
#include "sorient/rng.hpp"

namespace sorient {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd random_vector(Eigen::Index n, Xoshiro256& rng) {
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform() - 0.5;
    return v;
}

// Two passes of classical Gram-Schmidt against the first `count` columns.
void reorthogonalize(VectorXd& x, const MatrixXd& basis, Eigen::Index count) {
    if (count == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
        const VectorXd coeffs = basis.leftCols(count).transpose() * x;
        x.noalias() -= basis.leftCols(count) * coeffs;
    }
}

// Unit vector orthogonal to the first `count` columns, for restarts after a
// breakdown. Requires count < basis.rows().
VectorXd fresh_direction(const MatrixXd& basis, Eigen::Index count, Xoshiro256& rng) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        VectorXd x = random_vector(basis.rows(), rng);
        reorthogonalize(x, basis, count);
        const double norm = x.norm();
        if (norm > 1e-8) return x / norm;
    }
    throw Error(Errc::ConvergenceFailure, "could not generate a restart vector");
}

void ensure_capacity(MatrixXd& m, Eigen::Index needed, Eigen::Index cap) {
    if (m.cols() >= needed) return;
    const Eigen::Index grown = std::min(cap, std::max(needed, m.cols() + m.cols() / 2 + 8));
    m.conservativeResize(Eigen::NoChange, grown);
}

// Works on an operator A with rows >= cols, so that the right Lanczos basis
// fills the smaller space first and the bidiagonal is exact once it is full.
template <typename Mat>
TruncatedSvd lanczos(const Mat& a, int k, const SvdOptions& options) {
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    const double frob = a.norm();
    if (!(frob > 0.0) || !std::isfinite(frob)) {
        throw Error(Errc::DegenerateMatrix, "matrix is zero or contains non-finite values");
    }

    Xoshiro256 rng(options.seed);
    const Eigen::Index max_steps = std::min<Eigen::Index>(cols, options.max_iterations);
    const Eigen::Index initial = std::min<Eigen::Index>(cols, 2 * k + 16);
    MatrixXd left(rows, initial);
    MatrixXd right(cols, initial + 1);
    std::vector<double> alpha;
    std::vector<double> beta;
    const double breakdown = frob * 1e-13;
    const double rank_floor = frob * static_cast<double>(std::max(rows, cols)) *
                              std::numeric_limits<double>::epsilon();

    {
        VectorXd v0 = random_vector(cols, rng);
        right.col(0) = v0 / v0.norm();
    }

    VectorXd prev_sigma;
    MatrixXd p_vectors;
    MatrixXd q_vectors;
    VectorXd sigma;
    const Eigen::Index min_check_gap = std::max<Eigen::Index>(1, k / 20);
    Eigen::Index next_check = k;
    Eigen::Index steps = 0;
    bool converged = false;

    while (!converged) {
        if (steps >= max_steps) break;
        const Eigen::Index j = steps;
        ensure_capacity(left, j + 1, cols);
        ensure_capacity(right, j + 2, cols + 1);

        VectorXd u = a * right.col(j);
        if (j > 0) u -= beta[j - 1] * left.col(j - 1);
        reorthogonalize(u, left, j);
        double a_j = u.norm();
        if (a_j <= breakdown) {
            a_j = 0.0;
            left.col(j) = fresh_direction(left, j, rng);
        } else {
            left.col(j) = u / a_j;
        }
        alpha.push_back(a_j);

        VectorXd v = a.transpose() * left.col(j);
        v -= a_j * right.col(j);
        reorthogonalize(v, right, j + 1);
        double b_j = v.norm();
        if (j + 1 < cols) {
            if (b_j <= breakdown) {
                b_j = 0.0;
                right.col(j + 1) = fresh_direction(right, j + 1, rng);
            } else {
                right.col(j + 1) = v / b_j;
            }
        } else {
            // The right basis spans the whole column space; A^T U = V B^T exactly.
            b_j = 0.0;
        }
        beta.push_back(b_j);
        steps = j + 1;

        const bool exhausted = steps == cols;
        if (steps < k) continue;
        if (!exhausted && steps < next_check && steps != max_steps) continue;
        // The small SVD costs O(steps^3), so checks thin out as the basis grows.
        next_check = steps + std::max(min_check_gap, steps / 8);

        MatrixXd bidiag = MatrixXd::Zero(steps, steps);
        for (Eigen::Index i = 0; i < steps; ++i) {
            bidiag(i, i) = alpha[i];
            if (i + 1 < steps) bidiag(i, i + 1) = beta[i];
        }
        Eigen::BDCSVD<MatrixXd> small(bidiag, Eigen::ComputeFullU | Eigen::ComputeFullV);
        sigma = small.singularValues();
        p_vectors = small.matrixU();
        q_vectors = small.matrixV();
        if (exhausted) {
            converged = true;
            break;
        }
        bool ok = prev_sigma.size() >= k;
        const double residual_scale = beta.back();
        for (int i = 0; i < k && ok; ++i) {
            if (sigma[i] <= rank_floor) continue;
            const double residual = residual_scale * std::fabs(p_vectors(steps - 1, i));
            const double change = std::fabs(sigma[i] - prev_sigma[i]) / sigma[i];
            ok = residual <= options.tolerance * sigma[0] && change <= options.tolerance;
        }
        converged = ok;
        prev_sigma = sigma.head(k);
    }
    if (!converged) {
        throw Error(Errc::ConvergenceFailure,
                    fmt::format("truncated SVD did not converge for k={} within {} Lanczos steps", k, steps));
    }

    int rank = 0;
    while (rank < k && sigma[rank] > rank_floor) ++rank;

    TruncatedSvd out;
    out.requested_k = k;
    out.rank_deficient = rank < k;
    out.lanczos_steps = static_cast<int>(steps);
    out.sigma = sigma.head(rank);
    out.u = left.leftCols(steps) * p_vectors.leftCols(rank);
    out.v = right.leftCols(steps) * q_vectors.leftCols(rank);
    return out;
}

void orient(TruncatedSvd& s) {
    for (Eigen::Index c = 0; c < s.u.cols(); ++c) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index r = 0; r < s.u.rows(); ++r) {
            const double v = std::fabs(s.u(r, c));
            if (v > best_abs) {
                best_abs = v;
                best = r;
            }
        }
        if (s.u(best, c) < 0.0) {
            s.u.col(c) *= -1.0;
            s.v.col(c) *= -1.0;
        }
    }
}

void check_k(Eigen::Index rows, Eigen::Index cols, int k) {
    if (k < 1 || k > std::min(rows, cols)) {
        throw Error(Errc::InvalidConfig,
                    fmt::format("k={} must lie in [1, min(rows, cols) = {}]", k, std::min(rows, cols)));
    }
}

template <typename Mat>
TruncatedSvd run(const Mat& x, int k, const SvdOptions& options) {
    check_k(x.rows(), x.cols(), k);
    TruncatedSvd out;
    if (x.rows() >= x.cols()) {
        out = lanczos(x, k, options);
    } else {
        const Mat xt = x.transpose();
        out = lanczos(xt, k, options);
        std::swap(out.u, out.v);
    }
    orient(out);
    return out;
}

}  // namespace

TruncatedSvd truncated_svd(const Eigen::SparseMatrix<double>& x, int k, const SvdOptions& options) {
    return run(x, k, options);
}

TruncatedSvd truncated_svd(const Eigen::MatrixXd& x, int k, const SvdOptions& options) {
    return run(x, k, options);
}

}  // namespace sorient
