#include "sorient/lsa.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "binio.hpp"
#include "sorient/error.hpp"
#include "sorient/parallel.hpp"

namespace sorient {
namespace {

constexpr std::string_view kMagic = "SOLS";
constexpr double kZeroNorm = 1e-12;

std::ptrdiff_t find_sorted(const std::vector<std::string>& terms, std::string_view term) {
    auto it = std::lower_bound(terms.begin(), terms.end(), term);
    if (it == terms.end() || *it != term) return -1;
    return it - terms.begin();
}

}  // namespace

Weighting parse_weighting(std::string_view name) {
    if (name == "log") return Weighting::LogTfIdf;
    if (name == "raw") return Weighting::RawTfIdf;
    throw Error(Errc::InvalidConfig, fmt::format("unknown weighting '{}' (log|raw)", name));
}

RowScaling parse_row_scaling(std::string_view name) {
    if (name == "uksigma") return RowScaling::UkSigma;
    if (name == "uk") return RowScaling::Uk;
    throw Error(Errc::InvalidConfig, fmt::format("unknown row mode '{}' (uksigma|uk)", name));
}

std::string_view row_scaling_name(RowScaling s) noexcept { return s == RowScaling::UkSigma ? "uksigma" : "uk"; }

std::ptrdiff_t TermDocMatrix::row_of(std::string_view term) const { return find_sorted(terms, term); }

TermDocMatrix build_matrix(const Corpus& corpus, std::size_t min_df, Weighting weighting, unsigned threads) {
    if (corpus.size() == 0) throw Error(Errc::EmptyCorpus, "cannot build a matrix from an empty corpus");
    if (min_df < 1) throw Error(Errc::InvalidConfig, "min_df must be >= 1");
    TermDocMatrix m;
    m.doc_count = corpus.size();
    std::vector<double> idf;
    for (const auto& [term, st] : corpus.vocabulary()) {
        if (st.df >= min_df) {
            m.terms.push_back(term);
            idf.push_back(std::log2(static_cast<double>(m.doc_count) / static_cast<double>(st.df)));
        }
    }
    if (m.terms.empty()) {
        throw Error(Errc::AllTermsFiltered, fmt::format("no term has document frequency >= {}", min_df));
    }

    using Triplet = Eigen::Triplet<double>;
    std::vector<std::vector<Triplet>> per_doc(corpus.size());
    parallel_for(corpus.size(), threads, [&](std::size_t d) {
        std::vector<std::string_view> tokens(corpus.document(d).tokens.begin(), corpus.document(d).tokens.end());
        std::sort(tokens.begin(), tokens.end());
        for (std::size_t i = 0; i < tokens.size();) {
            std::size_t j = i;
            while (j < tokens.size() && tokens[j] == tokens[i]) ++j;
            const auto row = find_sorted(m.terms, tokens[i]);
            if (row >= 0) {
                const double tf = static_cast<double>(j - i);
                const double local = weighting == Weighting::LogTfIdf ? std::log2(1.0 + tf) : tf;
                const double w = local * idf[static_cast<std::size_t>(row)];
                if (w > 0.0) per_doc[d].emplace_back(static_cast<int>(row), static_cast<int>(d), w);
            }
            i = j;
        }
    });
    std::vector<Triplet> all;
    for (auto& t : per_doc) all.insert(all.end(), t.begin(), t.end());
    m.weights.resize(static_cast<Eigen::Index>(m.terms.size()), static_cast<Eigen::Index>(m.doc_count));
    m.weights.setFromTriplets(all.begin(), all.end());
    m.weights.makeCompressed();
    return m;
}

LsaSpace LsaSpace::from_svd(std::vector<std::string> terms, const TruncatedSvd& svd, RowScaling scaling) {
    if (static_cast<Eigen::Index>(terms.size()) != svd.u.rows()) {
        throw Error(Errc::InvalidConfig, "term count does not match the left singular vectors");
    }
    LsaSpace s;
    s.terms_ = std::move(terms);
    s.sigma_ = svd.sigma;
    s.scaling_ = scaling;
    s.rank_deficient_ = svd.rank_deficient;
    s.vectors_ = scaling == RowScaling::UkSigma ? Eigen::MatrixXd(svd.u * svd.sigma.asDiagonal()) : svd.u;
    return s;
}

std::ptrdiff_t LsaSpace::row_of(std::string_view term) const noexcept { return find_sorted(terms_, term); }

double LsaSpace::similarity(std::string_view a, std::string_view b) const {
    const auto ra = row_of(a);
    if (ra < 0) throw Error(Errc::UnknownTerm, fmt::format("'{}' is not in the space", a));
    const auto rb = row_of(b);
    if (rb < 0) throw Error(Errc::UnknownTerm, fmt::format("'{}' is not in the space", b));
    const auto va = vectors_.row(ra);
    const auto vb = vectors_.row(rb);
    const double na = va.norm();
    const double nb = vb.norm();
    if (na < kZeroNorm || nb < kZeroNorm) return 0.0;
    const double c = va.dot(vb) / (na * nb);
    return std::clamp(c, -1.0, 1.0);
}

LsaSpace LsaSpace::truncated(int k) const {
    if (k < 1 || k > this->k()) {
        throw Error(Errc::InvalidConfig, fmt::format("cannot truncate a {}-dimensional space to k={}", this->k(), k));
    }
    LsaSpace s;
    s.terms_ = terms_;
    s.sigma_ = sigma_.head(k);
    s.vectors_ = vectors_.leftCols(k);
    s.scaling_ = scaling_;
    s.rank_deficient_ = rank_deficient_;
    return s;
}

LsaSpace LsaSpace::with_row_scaling(RowScaling scaling) const {
    LsaSpace s = *this;
    if (scaling == scaling_) return s;
    s.scaling_ = scaling;
    if (scaling == RowScaling::Uk) {
        s.vectors_ = vectors_ * sigma_.cwiseInverse().asDiagonal();
    } else {
        s.vectors_ = vectors_ * sigma_.asDiagonal();
    }
    return s;
}

std::string LsaSpace::serialize() const {
    binio::Writer w;
    w.bytes(kMagic);
    w.u8(kFormatVersion);
    w.u8(scaling_ == RowScaling::UkSigma ? 0 : 1);
    w.u8(rank_deficient_ ? 1 : 0);
    w.u32(static_cast<std::uint32_t>(k()));
    for (Eigen::Index i = 0; i < sigma_.size(); ++i) w.f64(sigma_[i]);
    w.u64(terms_.size());
    for (const auto& t : terms_) w.str(t);
    for (Eigen::Index r = 0; r < vectors_.rows(); ++r) {
        for (Eigen::Index c = 0; c < vectors_.cols(); ++c) w.f64(vectors_(r, c));
    }
    return w.data();
}

LsaSpace LsaSpace::deserialize(std::string_view bytes) {
    binio::Reader r(bytes);
    if (r.bytes(kMagic.size()) != kMagic) throw Error(Errc::BadFormat, "not a space file (bad magic)");
    if (const auto v = r.u8(); v != kFormatVersion) {
        throw Error(Errc::BadFormat, fmt::format("unsupported space version {}", v));
    }
    LsaSpace s;
    const auto scaling = r.u8();
    if (scaling > 1) throw Error(Errc::BadFormat, "bad row scaling byte");
    s.scaling_ = scaling == 0 ? RowScaling::UkSigma : RowScaling::Uk;
    const auto flag = r.u8();
    if (flag > 1) throw Error(Errc::BadFormat, "bad rank flag byte");
    s.rank_deficient_ = flag == 1;
    const auto k = r.u32();
    if (k == 0 || std::uint64_t{k} * 8 > r.remaining()) throw Error(Errc::BadFormat, "bad dimension count");
    s.sigma_.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) s.sigma_[i] = r.f64();
    const auto n_terms = r.u64();
    if (n_terms > r.remaining()) throw Error(Errc::BadFormat, "term count exceeds file size");
    s.terms_.reserve(n_terms);
    for (std::uint64_t i = 0; i < n_terms; ++i) {
        std::string t = r.str();
        if (t.empty() || (!s.terms_.empty() && !(s.terms_.back() < t))) {
            throw Error(Errc::BadFormat, "terms not strictly ascending");
        }
        s.terms_.push_back(std::move(t));
    }
    if (r.remaining() != n_terms * k * 8) throw Error(Errc::BadFormat, "vector block has the wrong size");
    s.vectors_.resize(static_cast<Eigen::Index>(n_terms), k);
    for (std::uint64_t row = 0; row < n_terms; ++row) {
        for (std::uint32_t c = 0; c < k; ++c) s.vectors_(static_cast<Eigen::Index>(row), c) = r.f64();
    }
    return s;
}

void LsaSpace::save(const std::filesystem::path& path) const { binio::write_all(path, serialize()); }

LsaSpace LsaSpace::load(const std::filesystem::path& path) { return deserialize(binio::read_all(path)); }

LsaSpace build_space(const Corpus& corpus, int k, std::size_t min_df, Weighting weighting, RowScaling scaling,
                     const SvdOptions& options, unsigned threads) {
    if (k < 1) throw Error(Errc::InvalidConfig, "k must be >= 1");
    TermDocMatrix m = build_matrix(corpus, min_df, weighting, threads);
    const int max_k = static_cast<int>(std::min(m.weights.rows(), m.weights.cols()));
    const int effective = std::min(k, max_k);
    TruncatedSvd svd = truncated_svd(m.weights, effective, options);
    if (effective < k) svd.rank_deficient = true;
    svd.requested_k = k;
    return LsaSpace::from_svd(std::move(m.terms), svd, scaling);
}

double lsa_similarity(const LsaSpace& space, std::string_view a, std::string_view b) {
    return space.similarity(a, b);
}

double so_lsa(const LsaSpace& space, std::string_view word, const ParadigmSet& paradigms,
              std::vector<std::string>* missing) {
    if (!space.contains(word)) throw Error(Errc::UnknownTerm, fmt::format("'{}' is not in the space", word));
    auto assoc = [&](std::string_view w, const std::string& paradigm) {
        if (!space.contains(paradigm)) {
            if (missing) missing->push_back(paradigm);
            return 0.0;
        }
        return space.similarity(w, paradigm);
    };
    return so_a(assoc, word, paradigms);
}

}  // namespace sorient
