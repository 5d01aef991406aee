#include "sorient/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sorient/error.hpp"
#include "sorient/parallel.hpp"

namespace sorient {
namespace {

constexpr char32_t kInvalid = 0xFFFD;
constexpr char32_t kRightQuote = 0x2019;

std::vector<char32_t> decode_utf8(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto lead = static_cast<unsigned char>(text[i]);
        int extra = 0;
        char32_t cp = 0;
        if (lead < 0x80) {
            cp = lead;
        } else if ((lead & 0xE0) == 0xC0) {
            extra = 1;
            cp = lead & 0x1F;
        } else if ((lead & 0xF0) == 0xE0) {
            extra = 2;
            cp = lead & 0x0F;
        } else if ((lead & 0xF8) == 0xF0) {
            extra = 3;
            cp = lead & 0x07;
        } else {
            out.push_back(kInvalid);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k <= extra; ++k) {
            if (i + k >= text.size()) {
                ok = false;
                break;
            }
            const auto cont = static_cast<unsigned char>(text[i + k]);
            if ((cont & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cont & 0x3F);
        }
        if (!ok) {
            out.push_back(kInvalid);
            ++i;
            continue;
        }
        // Overlong forms and surrogates are rejected.
        const bool overlong = (extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
                              (extra == 3 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kInvalid;
        out.push_back(cp);
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Letter/digit classification by block. ASCII and Latin-1 are exact; above
// that, punctuation and symbol blocks are separators and everything else is
// treated as word material.
bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
    }
    if (cp < 0xC0) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
    if (cp <= 0xFF) return cp != 0xD7 && cp != 0xF7;
    if (cp == 0x37E || cp == 0x387) return false;
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;
    if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if (cp >= 0xFE10 && cp <= 0xFE6F) return false;
    if ((cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
        (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65)) {
        return false;
    }
    if (cp >= 0xFFF0 && cp <= 0xFFFF) return false;
    if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;
    return true;
}

char32_t simple_fold(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp < 0xC0) return cp;
    if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
    if (cp >= 0x100 && cp <= 0x137 && cp != 0x130) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x178) return 0xFF;
    if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp == 0x386) return 0x3AC;
    if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
    if (cp == 0x38C) return 0x3CC;
    if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
    if (cp == 0x3C2) return 0x3C3;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    return cp;
}

bool is_joiner(char32_t cp) { return cp == '-' || cp == '\'' || cp == kRightQuote; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
    });
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    const auto cps = decode_utf8(text);
    std::vector<std::string> tokens;
    std::string current;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t cp = cps[i];
        if (is_word_char(cp)) {
            append_utf8(current, simple_fold(cp));
            continue;
        }
        if (is_joiner(cp) && !current.empty() && i + 1 < cps.size() && is_word_char(cps[i + 1])) {
            current.push_back(cp == '-' ? '-' : '\'');
            continue;
        }
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "dir") return CorpusFormat::DirPerDoc;
    if (name == "lines") return CorpusFormat::LinePerDoc;
    throw Error(Errc::InvalidConfig, fmt::format("unknown corpus format '{}' (dir|lines)", name));
}

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
    for (std::size_t i = 0; i < documents_.size(); ++i) {
        auto& doc = documents_[i];
        doc.id = static_cast<std::uint32_t>(i);
        std::vector<std::string_view> seen(doc.tokens.begin(), doc.tokens.end());
        std::sort(seen.begin(), seen.end());
        for (std::size_t j = 0; j < seen.size();) {
            std::size_t k = j;
            while (k < seen.size() && seen[k] == seen[j]) ++k;
            auto it = vocabulary_.find(seen[j]);
            if (it == vocabulary_.end()) it = vocabulary_.emplace(std::string(seen[j]), TermStats{}).first;
            it->second.df += 1;
            it->second.tf += k - j;
            j = k;
        }
    }
}

TermStats Corpus::stats(std::string_view term) const {
    auto it = vocabulary_.find(term);
    return it == vocabulary_.end() ? TermStats{} : it->second;
}

std::string Corpus::serialize() const {
    std::string out;
    for (const auto& doc : documents_) {
        out += fmt::format("doc\t{}\t{}\t", doc.id, doc.source);
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            if (i) out.push_back(' ');
            out += doc.tokens[i];
        }
        out.push_back('\n');
    }
    for (const auto& [term, st] : vocabulary_) out += fmt::format("term\t{}\t{}\t{}\n", term, st.df, st.tf);
    return out;
}

Corpus make_corpus(const std::vector<std::string>& texts, const std::vector<std::string>& sources,
                   unsigned threads) {
    if (texts.empty()) throw Error(Errc::EmptyCorpus, "no documents");
    std::vector<Document> docs(texts.size());
    parallel_for(texts.size(), threads, [&](std::size_t i) {
        docs[i].tokens = tokenize(texts[i]);
        docs[i].source = i < sources.size() ? sources[i] : std::to_string(i);
    });
    return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, unsigned threads) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw Error(Errc::MissingPath, path.string());
    std::vector<std::string> texts;
    std::vector<std::string> sources;
    if (format == CorpusFormat::DirPerDoc) {
        if (!fs::is_directory(path)) throw Error(Errc::BadFormat, path.string() + " is not a directory");
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(path)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end(),
                  [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
        for (const auto& f : files) {
            texts.push_back(read_file(f));
            sources.push_back(fs::relative(f, path).generic_string());
        }
    } else {
        if (fs::is_directory(path)) throw Error(Errc::BadFormat, path.string() + " is a directory");
        const std::string content = read_file(path);
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= content.size()) {
            std::size_t end = content.find('\n', start);
            if (end == std::string::npos) end = content.size();
            ++line_no;
            std::string_view line(content.data() + start, end - start);
            if (!is_blank(line)) {
                texts.emplace_back(line);
                sources.push_back(std::to_string(line_no));
            }
            start = end + 1;
        }
    }
    if (texts.empty()) throw Error(Errc::EmptyCorpus, path.string() + " contains no documents");
    return make_corpus(texts, sources, threads);
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
    namespace fs = std::filesystem;
    auto joined = [](const Document& doc) {
        std::string line;
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            if (i) line.push_back(' ');
            line += doc.tokens[i];
        }
        return line;
    };
    if (format == CorpusFormat::DirPerDoc) {
        fs::create_directories(path);
        for (const auto& doc : corpus.documents()) {
            std::ofstream out(path / fmt::format("doc_{:06d}.txt", doc.id), std::ios::binary);
            if (!out) throw Error(Errc::Io, "cannot write under " + path.string());
            out << joined(doc) << '\n';
        }
    } else {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(Errc::Io, "cannot write " + path.string());
        for (const auto& doc : corpus.documents()) out << joined(doc) << '\n';
    }
}

}  // namespace sorient
