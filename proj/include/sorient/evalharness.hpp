#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sorient/index.hpp"
#include "sorient/lsa.hpp"
#include "sorient/orientation.hpp"
#include "sorient/pmi.hpp"

namespace sorient {

/// Labelled test words. A word carries exactly one label.
struct Lexicon {
    std::map<std::string, Label, std::less<>> entries;
    std::string provenance;
    std::size_t dropped_paradigms = 0;
    std::size_t dropped_ambiguous = 0;

    std::size_t size() const noexcept { return entries.size(); }
    bool contains(std::string_view w) const { return entries.find(w) != entries.end(); }
    std::optional<Label> label_of(std::string_view w) const;
    std::size_t count(Label l) const;
    std::vector<std::string> words() const;
    /// word<TAB>label lines in lexicographic order.
    std::string to_tsv() const;
};

enum class LexiconFormat { Tsv, GiRaw };
LexiconFormat parse_lexicon_format(std::string_view name);

/// tsv: "word<TAB>positive|negative" per line; '#' starts a comment line.
/// A word listed with both labels is a ConflictingLabel error.
///
/// gi-raw: General Inquirer rows. The first field is the entry (sense
/// suffixes such as "#9" are stripped, then lowercased); any later field
/// equal to "Positiv" or "Negativ" tags it. Rows with neither tag, and a
/// leading "Entry" header row, are skipped. Entries tagged both ways across
/// their senses are dropped as ambiguous.
///
/// In both formats words in `exclude` are removed and counted.
Lexicon parse_lexicon(std::string_view text, LexiconFormat format, const ParadigmSet& exclude);
Lexicon load_lexicon(const std::filesystem::path& path, LexiconFormat format, const ParadigmSet& exclude);

/// Test set for an evaluation with substituted paradigms: `lexicon` minus
/// the new paradigm words, plus the original paradigm words labelled by the
/// side they were on.
Lexicon swap_test_set(const Lexicon& lexicon, const ParadigmSet& replacement, const ParadigmSet& original);

struct CurvePoint {
    double threshold_percent = 0.0;
    std::size_t classified_count = 0;
    double accuracy = 0.0;
};

struct ThresholdCurve {
    std::string parameter = "none";
    std::string value = "-";
    // Settings the curve was produced with; empty/zero when not applicable.
    std::string measure;
    double epsilon = 0.0;
    std::uint32_t window = 0;
    int k = 0;
    std::string form;
    std::string op;
    std::size_t test_set_size = 0;
    std::vector<CurvePoint> points;
};

std::vector<double> default_thresholds();
/// step, 2*step, ..., 100.
std::vector<double> step_thresholds(double step);

/// ceil(percent / 100 * n), ignoring floating error below 1e-9.
std::size_t classified_count(double percent, std::size_t n);

/// Ranks results by confidence (ties by word) and reports, at each
/// threshold, the accuracy over the top ceil(p% * n) results. Throws
/// EmptyResults, UnknownWord (result not in lexicon) or InvalidConfig
/// (threshold outside (0, 100]).
ThresholdCurve evaluate(std::vector<OrientationResult> results, const Lexicon& lexicon,
                        const std::vector<double>& thresholds);

/// "parameter,value,threshold_percent,classified_count,accuracy" CSV.
std::string curves_to_csv(const std::vector<ThresholdCurve>& curves);

enum class Measure { Pmi, Lsa };
Measure parse_measure(std::string_view name);
std::string_view measure_name(Measure m) noexcept;

struct EvalConfig {
    Measure measure = Measure::Pmi;
    PmiConfig pmi{};
    SoForm form = SoForm::Product;
    /// 0 keeps every dimension of the space.
    int k = 0;
    unsigned threads = 1;
    std::optional<std::uint64_t> max_queries;
    std::vector<double> thresholds = default_thresholds();
};

/// What an evaluation runs against. `hits` is required for PMI and
/// `space` for LSA.
struct EvalInputs {
    const HitSource* hits = nullptr;
    const LsaSpace* space = nullptr;
    ParadigmSet paradigms = ParadigmSet::defaults();
    Lexicon lexicon;
};

/// SO of every test word. PMI scores every lexicon word; LSA scores the
/// lexicon words present in the space. Paradigm words are never scored.
/// Results come back in lexicon order whatever the thread count.
std::vector<OrientationResult> score_lexicon(const EvalInputs& inputs, const EvalConfig& config,
                                             std::size_t* skipped = nullptr);

ThresholdCurve run_evaluation(const EvalInputs& inputs, const EvalConfig& config);

enum class SweepParameter { Epsilon, Window, K, Form, Operator };
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view sweep_parameter_name(SweepParameter p) noexcept;

/// One curve per value, each over the same test set, tagged with the
/// parameter name and the canonical value text.
std::vector<ThresholdCurve> sweep(SweepParameter parameter, const std::vector<std::string>& values,
                                  const EvalInputs& inputs, const EvalConfig& base);

/// The lexicon word labelled `target` whose hit count is closest to that of
/// `word` (ties to the lexicographically first); never `word` itself. Words
/// in `exclude` are skipped. Throws NoCandidate.
std::string frequency_match(std::string_view word, Label target, const Lexicon& lexicon, const HitSource& hits,
                            const std::vector<std::string>& exclude = {});

/// Frequency-matched replacement for every paradigm word, each replacement
/// used once, matched in paradigm order.
ParadigmSet match_paradigms(const ParadigmSet& original, const Lexicon& lexicon, const HitSource& hits);

}  // namespace sorient
