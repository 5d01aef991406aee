#include "sorient/index.hpp"

#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>

#include "binio.hpp"
#include "sorient/error.hpp"
#include "sorient/parallel.hpp"

namespace sorient {
namespace {

constexpr std::string_view kMagic = "SOIX";

using DocSet = std::vector<std::uint32_t>;

DocSet intersect(const DocSet& a, const DocSet& b) {
    DocSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

DocSet unite(const DocSet& a, const DocSet& b) {
    DocSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Sorted, deduplicated union of several ascending position lists.
std::vector<std::uint32_t> merge_positions(const std::vector<std::span<const std::uint32_t>>& lists) {
    std::vector<std::uint32_t> out;
    for (const auto& l : lists) out.insert(out.end(), l.begin(), l.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool within_window(const std::vector<std::uint32_t>& left, const std::vector<std::uint32_t>& right,
                   std::uint32_t window) {
    for (const std::uint32_t p : left) {
        const std::uint32_t lo = p >= window ? p - window : 0;
        auto it = std::lower_bound(right.begin(), right.end(), lo);
        for (; it != right.end() && *it <= static_cast<std::uint64_t>(p) + window; ++it) {
            if (*it != p) return true;
        }
    }
    return false;
}

}  // namespace

std::span<const std::uint32_t> PostingList::positions_in(std::uint32_t doc) const {
    auto it = std::lower_bound(docs.begin(), docs.end(), doc);
    if (it == docs.end() || *it != doc) return {};
    return positions_at(static_cast<std::size_t>(it - docs.begin()));
}

PositionalIndex PositionalIndex::build(const Corpus& corpus, unsigned threads) {
    if (corpus.size() == 0) throw Error(Errc::EmptyCorpus, "cannot index an empty corpus");
    PositionalIndex index;
    index.doc_count_ = corpus.size();
    for (const auto& [term, st] : corpus.vocabulary()) index.terms_.push_back(term);
    const std::size_t n_terms = index.terms_.size();

    std::unordered_map<std::string_view, std::uint32_t> ids;
    ids.reserve(n_terms);
    for (std::size_t i = 0; i < n_terms; ++i) ids.emplace(index.terms_[i], static_cast<std::uint32_t>(i));

    const std::size_t n_docs = corpus.size();
    const std::size_t n_shards = std::max<std::size_t>(1, std::min<std::size_t>(threads, n_docs));
    const std::size_t shard_size = (n_docs + n_shards - 1) / n_shards;
    std::vector<std::vector<PostingList>> shards(n_shards);

    parallel_for(n_shards, static_cast<unsigned>(n_shards), [&](std::size_t s) {
        auto& lists = shards[s];
        lists.resize(n_terms);
        for (auto& l : lists) l.offsets.push_back(0);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> occurrences;
        const std::size_t begin = s * shard_size;
        const std::size_t end = std::min(n_docs, begin + shard_size);
        for (std::size_t d = begin; d < end; ++d) {
            const auto& tokens = corpus.document(d).tokens;
            occurrences.clear();
            for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
                occurrences.emplace_back(ids.at(tokens[pos]), static_cast<std::uint32_t>(pos));
            }
            std::sort(occurrences.begin(), occurrences.end());
            for (std::size_t i = 0; i < occurrences.size();) {
                const std::uint32_t term = occurrences[i].first;
                auto& list = lists[term];
                list.docs.push_back(static_cast<std::uint32_t>(d));
                for (; i < occurrences.size() && occurrences[i].first == term; ++i) {
                    list.positions.push_back(occurrences[i].second);
                }
                list.offsets.push_back(static_cast<std::uint32_t>(list.positions.size()));
            }
        }
    });

    index.lists_.resize(n_terms);
    parallel_for(n_terms, threads, [&](std::size_t t) {
        auto& merged = index.lists_[t];
        merged.offsets.push_back(0);
        for (const auto& shard : shards) {
            const auto& part = shard[t];
            const auto base = static_cast<std::uint32_t>(merged.positions.size());
            merged.docs.insert(merged.docs.end(), part.docs.begin(), part.docs.end());
            merged.positions.insert(merged.positions.end(), part.positions.begin(), part.positions.end());
            for (std::size_t i = 1; i < part.offsets.size(); ++i) merged.offsets.push_back(base + part.offsets[i]);
        }
    });
    return index;
}

const PostingList* PositionalIndex::postings(std::string_view term) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
    if (it == terms_.end() || *it != term) return nullptr;
    return &lists_[static_cast<std::size_t>(it - terms_.begin())];
}

std::uint64_t PositionalIndex::df(std::string_view term) const {
    const auto* p = postings(term);
    return p ? p->size() : 0;
}

std::uint64_t PositionalIndex::hits(const Query& query) const {
    if (query.kind() == Query::Kind::Term) return df(query.terms().front());
    return evaluate(query).size();
}

std::vector<std::uint32_t> PositionalIndex::matching_documents(const Query& query) const {
    return evaluate(query);
}

std::vector<std::uint32_t> PositionalIndex::evaluate(const Query& query) const {
    switch (query.kind()) {
        case Query::Kind::Term: {
            const auto* p = postings(query.terms().front());
            return p ? p->docs : DocSet{};
        }
        case Query::Kind::Phrase:
            return evaluate_phrase(query.terms());
        case Query::Kind::And:
            return intersect(evaluate(query.children()[0]), evaluate(query.children()[1]));
        case Query::Kind::Or: {
            DocSet acc;
            for (const auto& c : query.children()) acc = unite(acc, evaluate(c));
            return acc;
        }
        case Query::Kind::Near:
            return evaluate_near(query.children()[0], query.children()[1], query.window());
    }
    return {};
}

std::vector<std::uint32_t> PositionalIndex::evaluate_phrase(const std::vector<std::string>& tokens) const {
    std::vector<const PostingList*> lists;
    for (const auto& t : tokens) {
        const auto* p = postings(t);
        if (!p) return {};
        lists.push_back(p);
    }
    DocSet candidates = lists.front()->docs;
    for (std::size_t i = 1; i < lists.size() && !candidates.empty(); ++i) {
        candidates = intersect(candidates, lists[i]->docs);
    }
    DocSet out;
    for (const std::uint32_t doc : candidates) {
        const auto first = lists.front()->positions_in(doc);
        const bool found = std::any_of(first.begin(), first.end(), [&](std::uint32_t start) {
            for (std::size_t i = 1; i < lists.size(); ++i) {
                const auto pos = lists[i]->positions_in(doc);
                if (!std::binary_search(pos.begin(), pos.end(), start + static_cast<std::uint32_t>(i))) {
                    return false;
                }
            }
            return true;
        });
        if (found) out.push_back(doc);
    }
    return out;
}

std::vector<std::uint32_t> PositionalIndex::evaluate_near(const Query& a, const Query& b,
                                                          std::uint32_t window) const {
    auto resolve = [&](const Query& group) {
        std::vector<const PostingList*> lists;
        for (const auto& t : group.group_terms()) {
            if (const auto* p = postings(t)) lists.push_back(p);
        }
        return lists;
    };
    const auto left = resolve(a);
    const auto right = resolve(b);
    if (left.empty() || right.empty()) return {};

    auto docs_of = [](const std::vector<const PostingList*>& lists) {
        DocSet acc;
        for (const auto* p : lists) acc = unite(acc, p->docs);
        return acc;
    };
    auto positions_of = [](const std::vector<const PostingList*>& lists, std::uint32_t doc) {
        std::vector<std::span<const std::uint32_t>> spans;
        for (const auto* p : lists) spans.push_back(p->positions_in(doc));
        return merge_positions(spans);
    };

    DocSet out;
    for (const std::uint32_t doc : intersect(docs_of(left), docs_of(right))) {
        if (within_window(positions_of(left, doc), positions_of(right, doc), window)) out.push_back(doc);
    }
    return out;
}

std::string PositionalIndex::serialize() const {
    binio::Writer w;
    w.bytes(kMagic);
    w.u8(kFormatVersion);
    w.u64(doc_count_);
    w.u64(terms_.size());
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        const auto& list = lists_[t];
        w.str(terms_[t]);
        w.u32(static_cast<std::uint32_t>(list.size()));
        std::uint32_t prev_doc = 0;
        for (std::size_t i = 0; i < list.size(); ++i) {
            w.u32(list.docs[i] - prev_doc);
            prev_doc = list.docs[i];
            const auto pos = list.positions_at(i);
            w.u32(static_cast<std::uint32_t>(pos.size()));
            std::uint32_t prev_pos = 0;
            for (const auto p : pos) {
                w.u32(p - prev_pos);
                prev_pos = p;
            }
        }
    }
    return w.data();
}

PositionalIndex PositionalIndex::deserialize(std::string_view bytes) {
    binio::Reader r(bytes);
    if (r.bytes(kMagic.size()) != kMagic) throw Error(Errc::BadFormat, "not an index file (bad magic)");
    if (const auto v = r.u8(); v != kFormatVersion) {
        throw Error(Errc::BadFormat, fmt::format("unsupported index version {}", v));
    }
    PositionalIndex index;
    index.doc_count_ = r.u64();
    const auto n_terms = r.u64();
    if (n_terms > r.remaining()) throw Error(Errc::BadFormat, "term count exceeds file size");
    index.terms_.reserve(n_terms);
    index.lists_.reserve(n_terms);
    for (std::uint64_t t = 0; t < n_terms; ++t) {
        std::string term = r.str();
        if (term.empty() || (!index.terms_.empty() && !(index.terms_.back() < term))) {
            throw Error(Errc::BadFormat, "terms not strictly ascending");
        }
        PostingList list;
        const auto n = r.u32();
        list.offsets.push_back(0);
        std::uint64_t doc = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto delta = r.u32();
            if (i > 0 && delta == 0) throw Error(Errc::BadFormat, "document ids not ascending");
            doc += delta;
            if (doc >= index.doc_count_) throw Error(Errc::BadFormat, "document id out of range");
            list.docs.push_back(static_cast<std::uint32_t>(doc));
            const auto n_pos = r.u32();
            if (n_pos == 0) throw Error(Errc::BadFormat, "posting without positions");
            std::uint64_t pos = 0;
            for (std::uint32_t k = 0; k < n_pos; ++k) {
                const auto d = r.u32();
                if (k > 0 && d == 0) throw Error(Errc::BadFormat, "positions not ascending");
                pos += d;
                if (pos > UINT32_MAX) throw Error(Errc::BadFormat, "position overflow");
                list.positions.push_back(static_cast<std::uint32_t>(pos));
            }
            list.offsets.push_back(static_cast<std::uint32_t>(list.positions.size()));
        }
        index.terms_.push_back(std::move(term));
        index.lists_.push_back(std::move(list));
    }
    if (!r.done()) throw Error(Errc::BadFormat, "trailing bytes after index");
    return index;
}

void PositionalIndex::save(const std::filesystem::path& path) const { binio::write_all(path, serialize()); }

PositionalIndex PositionalIndex::load(const std::filesystem::path& path) {
    return deserialize(binio::read_all(path));
}

nlohmann::ordered_json PositionalIndex::to_json() const {
    nlohmann::ordered_json postings = nlohmann::ordered_json::object();
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        auto arr = nlohmann::ordered_json::array();
        const auto& list = lists_[t];
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto pos = list.positions_at(i);
            arr.push_back({{"doc", list.docs[i]}, {"positions", std::vector<std::uint32_t>(pos.begin(), pos.end())}});
        }
        postings[terms_[t]] = std::move(arr);
    }
    nlohmann::ordered_json out;
    out["format"] = "SOIX";
    out["version"] = kFormatVersion;
    out["doc_count"] = doc_count_;
    out["postings"] = std::move(postings);
    return out;
}

std::uint64_t CountingHitSource::hits(const Query& query) const {
    const auto n = count_.fetch_add(1) + 1;
    if (budget_ && n > *budget_) {
        throw Error(Errc::QueryBudgetExceeded, fmt::format("query budget of {} exhausted", *budget_));
    }
    return inner_.hits(query);
}

}  // namespace sorient
