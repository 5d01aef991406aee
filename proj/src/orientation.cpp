#include "sorient/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "sorient/corpus.hpp"
#include "sorient/error.hpp"

namespace sorient {

std::string_view label_name(Label label) noexcept {
    return label == Label::Positive ? "positive" : "negative";
}

Label parse_label(std::string_view text) {
    if (text == "positive") return Label::Positive;
    if (text == "negative") return Label::Negative;
    throw Error(Errc::BadFormat, fmt::format("unknown label '{}'", text));
}

ParadigmSet::ParadigmSet(std::vector<std::string> positive, std::vector<std::string> negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
    if (positive_.empty() || negative_.empty()) {
        throw Error(Errc::EmptyParadigmSet, "both positive and negative paradigm lists must be non-empty");
    }
    std::set<std::string_view> seen;
    for (const auto* list : {&positive_, &negative_}) {
        for (const auto& w : *list) {
            if (w.empty()) throw Error(Errc::InvalidParadigmSet, "empty paradigm word");
            if (!seen.insert(w).second) {
                throw Error(Errc::InvalidParadigmSet, fmt::format("paradigm word '{}' listed twice", w));
            }
        }
    }
}

ParadigmSet ParadigmSet::defaults() {
    return ParadigmSet({"good", "nice", "excellent", "positive", "fortunate", "correct", "superior"},
                       {"bad", "nasty", "poor", "negative", "unfortunate", "wrong", "inferior"});
}

ParadigmSet ParadigmSet::parse(std::string_view text) {
    std::vector<std::string> pos;
    std::vector<std::string> neg;
    std::vector<std::string>* section = nullptr;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string body = line.substr(first, last - first + 1);
        if (body == "[positive]") {
            section = &pos;
            continue;
        }
        if (body == "[negative]") {
            section = &neg;
            continue;
        }
        if (!section) {
            throw Error(Errc::MalformedLine, fmt::format("line {}: word before any section header", line_no));
        }
        auto tokens = tokenize(body);
        if (tokens.size() != 1) {
            throw Error(Errc::MalformedLine, fmt::format("line {}: expected a single word, got '{}'", line_no, body));
        }
        section->push_back(std::move(tokens.front()));
    }
    return ParadigmSet(std::move(pos), std::move(neg));
}

ParadigmSet ParadigmSet::load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error(Errc::MissingPath, path.string());
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string ParadigmSet::to_text() const {
    std::string out = "[positive]\n";
    for (const auto& w : positive_) out += w + "\n";
    out += "[negative]\n";
    for (const auto& w : negative_) out += w + "\n";
    return out;
}

bool ParadigmSet::contains(std::string_view word) const {
    auto eq = [&](const std::string& w) { return w == word; };
    return std::any_of(positive_.begin(), positive_.end(), eq) ||
           std::any_of(negative_.begin(), negative_.end(), eq);
}

Label ParadigmSet::label_of(std::string_view word) const {
    if (std::find(positive_.begin(), positive_.end(), word) != positive_.end()) return Label::Positive;
    if (std::find(negative_.begin(), negative_.end(), word) != negative_.end()) return Label::Negative;
    throw Error(Errc::UnknownWord, fmt::format("'{}' is not a paradigm word", word));
}

Label classify(double so) {
    if (!std::isfinite(so)) throw Error(Errc::NonFiniteValue, fmt::format("semantic orientation {} is not finite", so));
    return so > 0.0 ? Label::Positive : Label::Negative;
}

OrientationResult make_result(std::string word, double so) {
    const Label label = classify(so);
    return OrientationResult{std::move(word), so, label, std::fabs(so)};
}

}  // namespace sorient
