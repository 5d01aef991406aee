#include "sorient/scorer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "binio.hpp"
#include "sorient/corpus.hpp"
#include "sorient/error.hpp"

namespace sorient {

TextScore score_text(std::string_view text, const SoProvider& provider) {
    TextScore out;
    double sum = 0.0;
    bool have_dominant = false;
    for (const auto& token : tokenize(text)) {
        const auto so = provider(token);
        if (!so) {
            if (std::find(out.unknown_words.begin(), out.unknown_words.end(), token) == out.unknown_words.end()) {
                out.unknown_words.push_back(token);
            }
            continue;
        }
        if (!std::isfinite(*so)) throw Error(Errc::NonFiniteValue, fmt::format("SO of '{}' is not finite", token));
        sum += *so;
        ++out.known_word_count;
        if (!have_dominant || std::fabs(*so) > std::fabs(out.dominant_so)) {
            out.dominant_word = token;
            out.dominant_so = *so;
            have_dominant = true;
        }
    }
    if (out.known_word_count == 0) throw Error(Errc::NoKnownWords, "no token of the text has a known orientation");
    out.average_so = sum / static_cast<double>(out.known_word_count);
    out.label = classify(out.average_so);
    return out;
}

nlohmann::ordered_json to_json(const TextScore& s) {
    nlohmann::ordered_json j;
    j["average"] = s.average_so;
    j["label"] = label_name(s.label);
    j["dominant"] = {{"word", s.dominant_word}, {"so", s.dominant_so}};
    j["known"] = s.known_word_count;
    j["unknown"] = s.unknown_words;
    return j;
}

std::map<std::string, double, std::less<>> parse_so_table(std::string_view text) {
    std::map<std::string, double, std::less<>> table;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw Error(Errc::MalformedLine, fmt::format("line {}: expected word<TAB>so", line_no));
        }
        const auto word = line.substr(0, tab);
        auto rest = line.substr(tab + 1);
        rest = rest.substr(0, rest.find('\t'));
        double so = 0.0;
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), so);
        if (ec != std::errc() || ptr != rest.data() + rest.size()) {
            if (line_no == 1) continue;
            throw Error(Errc::MalformedLine, fmt::format("line {}: '{}' is not a number", line_no, rest));
        }
        const auto tokens = tokenize(word);
        if (tokens.size() != 1) {
            throw Error(Errc::MalformedLine, fmt::format("line {}: '{}' is not a single word", line_no, word));
        }
        table[tokens.front()] = so;
    }
    return table;
}

std::map<std::string, double, std::less<>> load_so_table(const std::filesystem::path& path) {
    return parse_so_table(binio::read_all(path));
}

}  // namespace sorient
