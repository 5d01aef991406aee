#include "sorient/syngen.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "sorient/error.hpp"
#include "sorient/rng.hpp"

namespace sorient {
namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
constexpr std::size_t kSyllables = kConsonants.size() * kVowels.size();
constexpr std::size_t kNameSpace = kSyllables * kSyllables * kSyllables;
constexpr std::uint64_t kSkewNumerator = std::uint64_t{1} << 40;
constexpr std::uint64_t kPlantedOffset = 21;

// Cumulative integer weights; sampling draws below(total) and bisects.
class WeightedTable {
public:
    template <typename Weight>
    WeightedTable(std::size_t n, Weight weight) {
        cumulative_.reserve(n);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            total += weight(i);
            cumulative_.push_back(total);
        }
    }
    std::size_t sample(Xoshiro256& rng) const {
        const std::uint64_t x = rng.below(cumulative_.back());
        return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), x) -
                                        cumulative_.begin());
    }

private:
    std::vector<std::uint64_t> cumulative_;
};

// Position at distance 1..window from `centre`, on a random side; the other
// side is used when the first falls outside the document.
std::size_t near_position(std::size_t centre, std::size_t len, std::uint32_t window, Xoshiro256& rng) {
    const std::size_t d = 1 + rng.below(window);
    const bool left = rng.below(2) == 0;
    if (left && centre >= d) return centre - d;
    if (!left && centre + d < len) return centre + d;
    return left ? centre + d : centre - d;
}

void check(bool ok, std::string_view what) {
    if (!ok) throw Error(Errc::InvalidSpec, std::string(what));
}

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string pseudo_word(std::size_t i) {
    // An affine bijection on the name space so consecutive indices look unrelated.
    std::size_t x = (i * 7919 + 12345) % kNameSpace;
    std::string out;
    for (int s = 0; s < 3; ++s) {
        const std::size_t syl = x % kSyllables;
        x /= kSyllables;
        out += kConsonants[syl / kVowels.size()];
        out += kVowels[syl % kVowels.size()];
    }
    return out;
}

void GenSpec::validate() const {
    check(alpha > 0.5 && alpha <= 1.0, fmt::format("alpha {} must lie in (0.5, 1]", alpha));
    check(n_docs >= 1 && doc_len >= 1 && planted_per_polarity >= 1 && noise_vocab >= 1 && window >= 1,
          "counts must be >= 1");
    check(n_docs >= 2 * planted_per_polarity,
          fmt::format("n_docs {} cannot hold every one of the {} planted words", n_docs, 2 * planted_per_polarity));
    check(doc_len >= std::max<std::size_t>(2 * window + 1, 4),
          fmt::format("doc_len {} is too short for window {}", doc_len, window));
    check(probability(background_positive) && probability(background_negative) && probability(alt_alpha) &&
              probability(alt_rate),
          "rates must lie in [0, 1]");
    check(alt_per_polarity >= 1 || alt_rate == 0.0, "alt_rate > 0 needs at least one secondary seed per polarity");
    check(2 * planted_per_polarity + 2 * alt_per_polarity + noise_vocab <= kNameSpace,
          fmt::format("at most {} generated word types are available", kNameSpace));
}

GenSpec GenSpec::without_noise() const {
    GenSpec s = *this;
    s.background_positive = 0.0;
    s.background_negative = 0.0;
    s.alt_rate = 0.0;
    return s;
}

GeneratedCorpus generate(const GenSpec& spec) {
    spec.validate();
    const ParadigmSet paradigms = ParadigmSet::defaults();
    const std::size_t planted = spec.planted_per_polarity;
    const std::size_t alts = spec.alt_per_polarity;

    // Name blocks: planted (positive, negative interleaved), then secondary
    // seeds (positive block, negative block), then noise.
    std::vector<std::string> planted_words(2 * planted);
    for (std::size_t r = 0; r < planted_words.size(); ++r) planted_words[r] = pseudo_word(r);
    std::vector<std::string> alt_pos;
    std::vector<std::string> alt_neg;
    for (std::size_t a = 0; a < alts; ++a) {
        alt_pos.push_back(pseudo_word(2 * planted + a));
        alt_neg.push_back(pseudo_word(2 * planted + alts + a));
    }
    std::vector<std::string> noise(spec.noise_vocab);
    for (std::size_t n = 0; n < noise.size(); ++n) noise[n] = pseudo_word(2 * planted + 2 * alts + n);

    const auto polarity_of_rank = [](std::size_t r) { return r % 2 == 0 ? Label::Positive : Label::Negative; };
    const WeightedTable planted_table(planted_words.size(),
                                      [](std::size_t r) { return kSkewNumerator / (r + kPlantedOffset); });
    const WeightedTable noise_table(noise.size(), [](std::size_t r) { return kSkewNumerator / (r + 1); });
    const auto side = [&](Label l) -> const std::vector<std::string>& {
        return l == Label::Positive ? paradigms.positive() : paradigms.negative();
    };

    Xoshiro256 rng(spec.seed);
    const std::size_t len = spec.doc_len;
    std::vector<Document> docs(spec.n_docs);
    for (std::size_t d = 0; d < spec.n_docs; ++d) {
        auto& tokens = docs[d].tokens;
        tokens.resize(len);
        for (auto& t : tokens) t = noise[noise_table.sample(rng)];

        const std::size_t rank = d < planted_words.size() ? d : planted_table.sample(rng);
        const Label polarity = polarity_of_rank(rank);
        const std::size_t i = rng.below(len);
        tokens[i] = planted_words[rank];

        const Label para_side = rng.bernoulli(spec.alpha) ? polarity : opposite(polarity);
        const auto& para_words = side(para_side);
        const std::string& para = para_words[rng.below(para_words.size())];
        const std::size_t j = near_position(i, len, spec.window, rng);
        tokens[j] = para;

        std::vector<std::size_t> taken{i, j};
        if (alts > 0 && rng.bernoulli(spec.alt_rate)) {
            const Label alt_side = rng.bernoulli(spec.alt_alpha) ? polarity : opposite(polarity);
            const auto& alt_words = alt_side == Label::Positive ? alt_pos : alt_neg;
            const std::string& alt = alt_words[rng.below(alt_words.size())];
            for (int attempt = 0; attempt < 64; ++attempt) {
                const std::size_t k = near_position(i, len, spec.window, rng);
                if (k != j) {
                    tokens[k] = alt;
                    taken.push_back(k);
                    break;
                }
            }
        }
        for (const auto& [rate, label] : {std::pair{spec.background_positive, Label::Positive},
                                          std::pair{spec.background_negative, Label::Negative}}) {
            if (!rng.bernoulli(rate)) continue;
            const auto& words = side(label);
            const std::string& w = words[rng.below(words.size())];
            std::size_t p;
            do {
                p = rng.below(len);
            } while (std::find(taken.begin(), taken.end(), p) != taken.end());
            tokens[p] = w;
            taken.push_back(p);
        }
        docs[d].source = fmt::format("syn:{}", d);
    }

    GeneratedCorpus out{Corpus(std::move(docs)), Lexicon{}, std::nullopt};
    if (alts > 0) out.alt_paradigms = ParadigmSet(alt_pos, alt_neg);
    for (std::size_t r = 0; r < planted_words.size(); ++r) {
        out.lexicon.entries.emplace(planted_words[r], polarity_of_rank(r));
    }
    out.lexicon.provenance = fmt::format("syngen seed={} docs={} alpha={}", spec.seed, spec.n_docs, spec.alpha);
    return out;
}

}  // namespace sorient
