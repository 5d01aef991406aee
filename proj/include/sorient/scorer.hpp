#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sorient/orientation.hpp"

namespace sorient {

/// Orientation of a word, or nothing when the word is unknown.
using SoProvider = std::function<std::optional<double>(std::string_view)>;

struct TextScore {
    double average_so = 0.0;
    std::size_t known_word_count = 0;
    /// Distinct unknown tokens in order of first appearance.
    std::vector<std::string> unknown_words;
    std::string dominant_word;
    double dominant_so = 0.0;
    Label label = Label::Negative;
};

/// Mean SO over the known tokens of `text` (repeated tokens count each
/// time). The dominant word has the largest |SO|; the earliest wins ties.
/// Throws NoKnownWords.
TextScore score_text(std::string_view text, const SoProvider& provider);

/// {"average", "label", "dominant": {"word", "so"}, "known", "unknown": [...]}
nlohmann::ordered_json to_json(const TextScore& score);

/// word<TAB>so[<TAB>anything] lines, as written by `sorient so`. Lines whose
/// second field is not a number (a header) are skipped only on line 1.
std::map<std::string, double, std::less<>> parse_so_table(std::string_view text);
std::map<std::string, double, std::less<>> load_so_table(const std::filesystem::path& path);

}  // namespace sorient
