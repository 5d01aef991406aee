#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sorient/corpus.hpp"
#include "sorient/query.hpp"

namespace sorient {

/// Anything that can answer hits(query): the number of distinct documents
/// matching a query, out of doc_count() documents.
class HitSource {
public:
    virtual ~HitSource() = default;
    virtual std::uint64_t hits(const Query& query) const = 0;
    virtual std::uint64_t doc_count() const = 0;
};

/// Documents containing one term, with the ascending positions in each.
struct PostingList {
    std::vector<std::uint32_t> docs;
    std::vector<std::uint32_t> offsets;  // docs.size() + 1 entries into positions
    std::vector<std::uint32_t> positions;

    std::size_t size() const noexcept { return docs.size(); }
    std::span<const std::uint32_t> positions_at(std::size_t i) const {
        return {positions.data() + offsets[i], positions.data() + offsets[i + 1]};
    }
    /// Positions in document `doc`, or an empty span if absent.
    std::span<const std::uint32_t> positions_in(std::uint32_t doc) const;

    friend bool operator==(const PostingList&, const PostingList&) = default;
};

/// Immutable positional inverted index. All query methods are const and
/// touch no shared mutable state, so concurrent readers need no locking.
class PositionalIndex final : public HitSource {
public:
    static PositionalIndex build(const Corpus& corpus, unsigned threads = 1);

    std::uint64_t doc_count() const override { return doc_count_; }
    std::uint64_t hits(const Query& query) const override;

    /// Sorted ids of the documents matching `query`.
    std::vector<std::uint32_t> matching_documents(const Query& query) const;

    std::uint64_t df(std::string_view term) const;
    const PostingList* postings(std::string_view term) const;
    /// Indexed terms in lexicographic order.
    const std::vector<std::string>& terms() const noexcept { return terms_; }

    /// Binary layout (little-endian): "SOIX", u8 version, u64 doc count,
    /// u64 term count, then per term: u32 byte length, UTF-8 bytes, u32 df,
    /// and per posting: u32 doc-id delta, u32 position count, u32 position
    /// deltas. The first delta in each list is the absolute value.
    void save(const std::filesystem::path& path) const;
    static PositionalIndex load(const std::filesystem::path& path);
    std::string serialize() const;
    static PositionalIndex deserialize(std::string_view bytes);

    nlohmann::ordered_json to_json() const;

    friend bool operator==(const PositionalIndex& a, const PositionalIndex& b) {
        return a.doc_count_ == b.doc_count_ && a.terms_ == b.terms_ && a.lists_ == b.lists_;
    }

    static constexpr std::uint8_t kFormatVersion = 1;

private:
    std::vector<std::uint32_t> evaluate(const Query& query) const;
    std::vector<std::uint32_t> evaluate_phrase(const std::vector<std::string>& tokens) const;
    std::vector<std::uint32_t> evaluate_near(const Query& a, const Query& b, std::uint32_t window) const;

    std::uint64_t doc_count_ = 0;
    std::vector<std::string> terms_;
    std::vector<PostingList> lists_;
};

/// Wraps a HitSource and counts every hits() call. With a budget, the call
/// that would exceed it throws QueryBudgetExceeded instead of running.
class CountingHitSource final : public HitSource {
public:
    explicit CountingHitSource(const HitSource& inner, std::optional<std::uint64_t> budget = std::nullopt)
        : inner_(inner), budget_(budget) {}

    std::uint64_t hits(const Query& query) const override;
    std::uint64_t doc_count() const override { return inner_.doc_count(); }

    std::uint64_t queries() const noexcept { return count_.load(); }
    void reset() noexcept { count_.store(0); }

private:
    const HitSource& inner_;
    std::optional<std::uint64_t> budget_;
    mutable std::atomic<std::uint64_t> count_{0};
};

}  // namespace sorient
