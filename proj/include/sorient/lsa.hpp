#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sorient/corpus.hpp"
#include "sorient/orientation.hpp"
#include "sorient/svd.hpp"

namespace sorient {

inline constexpr int kDefaultLsaDimensions = 300;
inline constexpr std::size_t kDefaultMinDf = 2;

enum class Weighting {
    LogTfIdf,  // log2(1 + tf) * log2(N / df)
    RawTfIdf,  // tf * log2(N / df)
};

/// Which rows the space compares: U_k Sigma_k (rows of the rank-k
/// reconstruction, up to an orthonormal change of basis) or plain U_k.
enum class RowScaling { UkSigma, Uk };

Weighting parse_weighting(std::string_view name);
RowScaling parse_row_scaling(std::string_view name);
std::string_view row_scaling_name(RowScaling s) noexcept;

/// Sparse terms x documents weight matrix. Rows are the vocabulary terms
/// with df >= min_df in lexicographic order; columns are document ids.
/// Entries whose weight is zero (terms present in every document) are not
/// stored.
struct TermDocMatrix {
    std::vector<std::string> terms;
    std::size_t doc_count = 0;
    Eigen::SparseMatrix<double> weights;

    /// Row of `term`, or -1.
    std::ptrdiff_t row_of(std::string_view term) const;
};

TermDocMatrix build_matrix(const Corpus& corpus, std::size_t min_df = kDefaultMinDf,
                           Weighting weighting = Weighting::LogTfIdf, unsigned threads = 1);

/// Rank-k term space. Immutable once built.
class LsaSpace {
public:
    static LsaSpace from_svd(std::vector<std::string> terms, const TruncatedSvd& svd,
                             RowScaling scaling = RowScaling::UkSigma);

    int k() const noexcept { return static_cast<int>(sigma_.size()); }
    const Eigen::VectorXd& singular_values() const noexcept { return sigma_; }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }
    RowScaling row_scaling() const noexcept { return scaling_; }
    bool rank_deficient() const noexcept { return rank_deficient_; }

    bool contains(std::string_view term) const noexcept { return row_of(term) >= 0; }
    std::ptrdiff_t row_of(std::string_view term) const noexcept;

    /// Cosine of the two term vectors; 0 when either has norm < 1e-12.
    /// Throws UnknownTerm when a word is not a row of the space.
    double similarity(std::string_view a, std::string_view b) const;

    /// The leading `k` dimensions, which is exactly the rank-k space.
    LsaSpace truncated(int k) const;
    LsaSpace with_row_scaling(RowScaling scaling) const;

    /// Binary layout (little-endian): "SOLS", u8 version, u8 row scaling
    /// (0 = uksigma, 1 = uk), u8 rank-deficient flag, u32 k, k x f64
    /// singular values, u64 term count, per term u32 length + UTF-8 bytes,
    /// then term-count x k f64 term vectors in row-major order.
    std::string serialize() const;
    static LsaSpace deserialize(std::string_view bytes);
    void save(const std::filesystem::path& path) const;
    static LsaSpace load(const std::filesystem::path& path);

    static constexpr std::uint8_t kFormatVersion = 1;

private:
    std::vector<std::string> terms_;
    Eigen::VectorXd sigma_;
    Eigen::MatrixXd vectors_;  // one row per term
    RowScaling scaling_ = RowScaling::UkSigma;
    bool rank_deficient_ = false;
};

/// Builds the matrix, decomposes it and returns the rank-k space. When the
/// matrix has lower numerical rank the space is smaller and flagged.
LsaSpace build_space(const Corpus& corpus, int k = kDefaultLsaDimensions, std::size_t min_df = kDefaultMinDf,
                     Weighting weighting = Weighting::LogTfIdf, RowScaling scaling = RowScaling::UkSigma,
                     const SvdOptions& options = {}, unsigned threads = 1);

double lsa_similarity(const LsaSpace& space, std::string_view a, std::string_view b);

/// Sum of cosines to positive paradigms minus the sum to negative ones.
/// Paradigm words missing from the space contribute 0 and are appended to
/// `missing` when given. Throws UnknownTerm if `word` is not in the space.
double so_lsa(const LsaSpace& space, std::string_view word, const ParadigmSet& paradigms,
              std::vector<std::string>* missing = nullptr);

}  // namespace sorient
