#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sorient/corpus.hpp"
#include "sorient/evalharness.hpp"
#include "sorient/orientation.hpp"

namespace sorient {

/// Parameters of the planted-orientation generator. The algorithm is fixed
/// and documented in docs/formats.md; the same GenSpec always produces the same
/// bytes.
struct GenSpec {
    std::uint64_t seed = 42;
    std::size_t n_docs = 5000;
    std::size_t doc_len = 60;
    std::size_t planted_per_polarity = 250;
    /// Chance that a planted word's nearby paradigm word shares its polarity.
    double alpha = 0.9;
    std::size_t noise_vocab = 2000;
    /// Maximum distance between a planted word and its paradigm word.
    std::uint32_t window = 10;
    /// Per-document chance of one extra paradigm word at a random position.
    double background_positive = 0.10;
    double background_negative = 0.04;
    /// Secondary seed words: weaker stand-ins for the paradigms, used to
    /// test evaluation with substituted paradigms.
    std::size_t alt_per_polarity = 7;
    double alt_alpha = 0.6;
    double alt_rate = 1.0;

    /// Throws InvalidSpec.
    void validate() const;
    /// Same parameters with background paradigms and secondary seeds switched off.
    GenSpec without_noise() const;
};

struct GeneratedCorpus {
    Corpus corpus;
    /// Ground truth for the planted words only.
    Lexicon lexicon;
    /// The secondary seed words as a paradigm set, absent when
    /// alt_per_polarity is 0.
    std::optional<ParadigmSet> alt_paradigms;
};

GeneratedCorpus generate(const GenSpec& spec);

/// Pseudo-word number `i` (three consonant-vowel syllables). Distinct
/// indices below 343000 give distinct words.
std::string pseudo_word(std::size_t i);

}  // namespace sorient
