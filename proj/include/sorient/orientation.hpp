#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sorient {

enum class Label { Positive, Negative };

std::string_view label_name(Label label) noexcept;
/// Accepts "positive"/"negative" (case-sensitive).
Label parse_label(std::string_view text);
inline Label opposite(Label l) noexcept { return l == Label::Positive ? Label::Negative : Label::Positive; }

/// Positive and negative seed words. Both lists are non-empty, duplicate-free
/// and disjoint; the constructor enforces this.
class ParadigmSet {
public:
    ParadigmSet(std::vector<std::string> positive, std::vector<std::string> negative);

    /// good, nice, excellent, positive, fortunate, correct, superior versus
    /// bad, nasty, poor, negative, unfortunate, wrong, inferior.
    static ParadigmSet defaults();

    /// Two-section text: "[positive]" and "[negative]" headers, one word per
    /// line, '#' comments and blank lines ignored.
    static ParadigmSet parse(std::string_view text);
    static ParadigmSet load(const std::filesystem::path& path);
    std::string to_text() const;

    const std::vector<std::string>& positive() const noexcept { return positive_; }
    const std::vector<std::string>& negative() const noexcept { return negative_; }
    std::size_t size() const noexcept { return positive_.size() + negative_.size(); }

    bool contains(std::string_view word) const;
    /// Polarity of a paradigm word; the word must be in the set.
    Label label_of(std::string_view word) const;

    /// Positive and negative lists exchanged.
    ParadigmSet swapped() const { return ParadigmSet(negative_, positive_); }

    friend bool operator==(const ParadigmSet&, const ParadigmSet&) = default;

private:
    std::vector<std::string> positive_;
    std::vector<std::string> negative_;
};

struct OrientationResult {
    std::string word;
    double so = 0.0;
    Label label = Label::Negative;
    double confidence = 0.0;
};

/// so > 0 is positive; everything else, including an exact 0, is negative.
/// Throws NonFiniteValue for NaN or infinities.
Label classify(double so);
OrientationResult make_result(std::string word, double so);

/// Sum of assoc(word, p) over positive paradigms minus the sum of
/// assoc(word, n) over negative ones.
template <typename Assoc>
double so_a(Assoc&& assoc, std::string_view word, const ParadigmSet& paradigms) {
    double pos = 0.0;
    for (const auto& p : paradigms.positive()) pos += assoc(word, p);
    double neg = 0.0;
    for (const auto& n : paradigms.negative()) neg += assoc(word, n);
    return pos - neg;
}

}  // namespace sorient
