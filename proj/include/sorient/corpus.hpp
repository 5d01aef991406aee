#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sorient {

/// Splits text into maximal runs of letters and digits, keeping a hyphen or
/// apostrophe only when it sits between two such characters. Input is UTF-8;
/// tokens are lowercased with simple (one-to-one) case folding. U+2019 is
/// treated as an apostrophe and emitted as '.
std::vector<std::string> tokenize(std::string_view text);

struct Document {
    std::uint32_t id = 0;
    std::vector<std::string> tokens;
    std::string source;
};

struct TermStats {
    std::uint64_t df = 0;
    std::uint64_t tf = 0;
};

enum class CorpusFormat { DirPerDoc, LinePerDoc };

CorpusFormat parse_corpus_format(std::string_view name);

/// Immutable token-level document collection. Documents carry dense ids in
/// ingestion order; vocabulary is keyed lexicographically.
class Corpus {
public:
    Corpus() = default;
    /// Assigns ids 0..n-1 in the given order and computes vocabulary stats.
    explicit Corpus(std::vector<Document> documents);

    std::size_t size() const noexcept { return documents_.size(); }
    const std::vector<Document>& documents() const noexcept { return documents_; }
    const Document& document(std::size_t id) const { return documents_.at(id); }
    const std::map<std::string, TermStats, std::less<>>& vocabulary() const noexcept {
        return vocabulary_;
    }
    TermStats stats(std::string_view term) const;

    /// Stable textual dump (one document per line, then vocabulary), used to
    /// check that repeated loads are identical.
    std::string serialize() const;

private:
    std::vector<Document> documents_;
    std::map<std::string, TermStats, std::less<>> vocabulary_;
};

/// Builds a corpus from raw texts (one per document), tokenizing in parallel.
Corpus make_corpus(const std::vector<std::string>& texts,
                   const std::vector<std::string>& sources, unsigned threads = 1);

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   unsigned threads = 1);

/// Writes each document's tokens space-joined, either one file per document
/// (doc_000000.txt, ...) under a directory or one line per document.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format);

}  // namespace sorient
