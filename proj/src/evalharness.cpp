#include "sorient/evalharness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "binio.hpp"
#include "sorient/corpus.hpp"
#include "sorient/error.hpp"
#include "sorient/parallel.hpp"

namespace sorient {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        const auto len = end == std::string_view::npos ? std::string_view::npos : end - start;
        std::string_view line = text.substr(start, len);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    const bool tabbed = line.find('\t') != std::string_view::npos;
    std::size_t i = 0;
    while (i <= line.size()) {
        if (tabbed) {
            const auto end = line.find('\t', i);
            out.push_back(trim(line.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i)));
            if (end == std::string_view::npos) break;
            i = end + 1;
        } else {
            while (i < line.size() && (line[i] == ' ' || line[i] == ',')) ++i;
            if (i >= line.size()) break;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != ',') ++j;
            out.push_back(line.substr(i, j - i));
            i = j;
        }
    }
    return out;
}

// The single normalized token of `raw`, or nothing.
std::optional<std::string> single_token(std::string_view raw) {
    auto tokens = tokenize(raw);
    if (tokens.size() != 1) return std::nullopt;
    return std::move(tokens.front());
}

void drop_paradigms(Lexicon& lex, const ParadigmSet& exclude) {
    for (const auto* side : {&exclude.positive(), &exclude.negative()}) {
        for (const auto& w : *side) {
            if (auto it = lex.entries.find(w); it != lex.entries.end()) {
                lex.entries.erase(it);
                ++lex.dropped_paradigms;
            }
        }
    }
}

Lexicon parse_tsv(std::string_view text) {
    Lexicon lex;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
            throw Error(Errc::MalformedLine, fmt::format("line {}: expected word<TAB>label", i + 1));
        }
        const auto word = single_token(trim(line.substr(0, tab)));
        if (!word) throw Error(Errc::MalformedLine, fmt::format("line {}: entry is not a single word", i + 1));
        const auto label_text = trim(line.substr(tab + 1));
        Label label;
        if (label_text == "positive") {
            label = Label::Positive;
        } else if (label_text == "negative") {
            label = Label::Negative;
        } else {
            throw Error(Errc::MalformedLine, fmt::format("line {}: unknown label '{}'", i + 1, label_text));
        }
        auto [it, inserted] = lex.entries.emplace(*word, label);
        if (!inserted && it->second != label) {
            throw Error(Errc::ConflictingLabel, fmt::format("line {}: '{}' already labelled {}", i + 1, *word,
                                                            label_name(it->second)));
        }
    }
    return lex;
}

Lexicon parse_gi(std::string_view text) {
    struct Tags {
        bool positive = false;
        bool negative = false;
    };
    std::map<std::string, Tags, std::less<>> seen;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.empty() || fields.front().empty()) {
            throw Error(Errc::MalformedLine, fmt::format("line {}: missing entry field", i + 1));
        }
        std::string_view entry = fields.front();
        if (entry == "Entry") continue;
        if (const auto hash = entry.find('#'); hash != std::string_view::npos) entry = entry.substr(0, hash);
        Tags tags;
        for (std::size_t f = 1; f < fields.size(); ++f) {
            if (fields[f] == "Positiv") tags.positive = true;
            if (fields[f] == "Negativ") tags.negative = true;
        }
        if (!tags.positive && !tags.negative) continue;
        const auto word = single_token(entry);
        if (!word) throw Error(Errc::MalformedLine, fmt::format("line {}: entry is not a single word", i + 1));
        auto& t = seen[*word];
        t.positive = t.positive || tags.positive;
        t.negative = t.negative || tags.negative;
    }
    Lexicon lex;
    for (const auto& [word, t] : seen) {
        if (t.positive && t.negative) {
            ++lex.dropped_ambiguous;
            continue;
        }
        lex.entries.emplace(word, t.positive ? Label::Positive : Label::Negative);
    }
    return lex;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw Error(Errc::InvalidConfig, fmt::format("bad {} value '{}'", what, text));
    }
    return value;
}

}  // namespace

std::optional<Label> Lexicon::label_of(std::string_view w) const {
    const auto it = entries.find(w);
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

std::size_t Lexicon::count(Label l) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [l](const auto& e) { return e.second == l; }));
}

std::vector<std::string> Lexicon::words() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& [w, l] : entries) out.push_back(w);
    return out;
}

std::string Lexicon::to_tsv() const {
    std::string out;
    for (const auto& [w, l] : entries) {
        out += w;
        out += '\t';
        out += label_name(l);
        out += '\n';
    }
    return out;
}

LexiconFormat parse_lexicon_format(std::string_view name) {
    if (name == "tsv") return LexiconFormat::Tsv;
    if (name == "gi-raw") return LexiconFormat::GiRaw;
    throw Error(Errc::InvalidConfig, fmt::format("unknown lexicon format '{}' (tsv|gi-raw)", name));
}

Lexicon parse_lexicon(std::string_view text, LexiconFormat format, const ParadigmSet& exclude) {
    Lexicon lex = format == LexiconFormat::Tsv ? parse_tsv(text) : parse_gi(text);
    drop_paradigms(lex, exclude);
    return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path, LexiconFormat format, const ParadigmSet& exclude) {
    Lexicon lex = parse_lexicon(binio::read_all(path), format, exclude);
    lex.provenance = path.generic_string();
    return lex;
}

Lexicon swap_test_set(const Lexicon& lexicon, const ParadigmSet& replacement, const ParadigmSet& original) {
    Lexicon out = lexicon;
    out.dropped_paradigms = 0;
    drop_paradigms(out, replacement);
    for (const auto& w : original.positive()) {
        if (!replacement.contains(w)) out.entries[w] = Label::Positive;
    }
    for (const auto& w : original.negative()) {
        if (!replacement.contains(w)) out.entries[w] = Label::Negative;
    }
    return out;
}

std::vector<double> default_thresholds() { return {25.0, 50.0, 75.0, 100.0}; }

std::vector<double> step_thresholds(double step) {
    if (!(step > 0.0) || step > 100.0) {
        throw Error(Errc::InvalidConfig, fmt::format("threshold step {} must lie in (0, 100]", step));
    }
    std::vector<double> out;
    for (int i = 1;; ++i) {
        const double p = step * i;
        if (p >= 100.0 - 1e-9) break;
        out.push_back(p);
    }
    out.push_back(100.0);
    return out;
}

std::size_t classified_count(double percent, std::size_t n) {
    const double exact = percent / 100.0 * static_cast<double>(n);
    const auto c = static_cast<std::size_t>(std::ceil(exact - 1e-9));
    return std::clamp<std::size_t>(c, n == 0 ? 0 : 1, n);
}

ThresholdCurve evaluate(std::vector<OrientationResult> results, const Lexicon& lexicon,
                        const std::vector<double>& thresholds) {
    if (results.empty()) throw Error(Errc::EmptyResults, "nothing to evaluate");
    for (const double p : thresholds) {
        if (!(p > 0.0) || p > 100.0) throw Error(Errc::InvalidConfig, fmt::format("threshold {} outside (0, 100]", p));
    }
    std::sort(results.begin(), results.end(), [](const OrientationResult& a, const OrientationResult& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.word < b.word;
    });
    std::vector<std::size_t> correct_prefix(results.size() + 1, 0);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto truth = lexicon.label_of(results[i].word);
        if (!truth) throw Error(Errc::UnknownWord, fmt::format("'{}' is not in the lexicon", results[i].word));
        correct_prefix[i + 1] = correct_prefix[i] + (results[i].label == *truth ? 1 : 0);
    }
    ThresholdCurve curve;
    curve.test_set_size = results.size();
    for (const double p : thresholds) {
        const auto c = classified_count(p, results.size());
        curve.points.push_back({p, c, static_cast<double>(correct_prefix[c]) / static_cast<double>(c)});
    }
    return curve;
}

std::string curves_to_csv(const std::vector<ThresholdCurve>& curves) {
    std::string out = "parameter,value,threshold_percent,classified_count,accuracy\n";
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            out += fmt::format("{},{},{},{},{}\n", c.parameter, c.value, p.threshold_percent, p.classified_count,
                               p.accuracy);
        }
    }
    return out;
}

Measure parse_measure(std::string_view name) {
    if (name == "pmi") return Measure::Pmi;
    if (name == "lsa") return Measure::Lsa;
    throw Error(Errc::InvalidConfig, fmt::format("unknown measure '{}' (pmi|lsa)", name));
}

std::string_view measure_name(Measure m) noexcept { return m == Measure::Pmi ? "pmi" : "lsa"; }

std::vector<OrientationResult> score_lexicon(const EvalInputs& inputs, const EvalConfig& config,
                                             std::size_t* skipped) {
    std::vector<std::string> words;
    std::size_t missing = 0;
    for (const auto& [w, l] : inputs.lexicon.entries) {
        if (inputs.paradigms.contains(w)) continue;
        if (config.measure == Measure::Lsa) {
            if (!inputs.space) throw Error(Errc::InvalidConfig, "LSA evaluation needs a space");
            if (!inputs.space->contains(w)) {
                ++missing;
                continue;
            }
        }
        words.push_back(w);
    }
    if (skipped) *skipped = missing;

    std::vector<OrientationResult> results(words.size());
    if (config.measure == Measure::Pmi) {
        if (!inputs.hits) throw Error(Errc::InvalidConfig, "PMI evaluation needs an index");
        config.pmi.validate();
        CountingHitSource counted(*inputs.hits, config.max_queries);
        const SoPmi scorer(counted, inputs.paradigms, config.pmi, config.form);
        parallel_for(words.size(), config.threads,
                     [&](std::size_t i) { results[i] = make_result(words[i], scorer(words[i])); });
    } else {
        const LsaSpace* space = inputs.space;
        LsaSpace cut;
        if (config.k != 0 && config.k != space->k()) {
            cut = space->truncated(config.k);
            space = &cut;
        }
        parallel_for(words.size(), config.threads, [&](std::size_t i) {
            results[i] = make_result(words[i], so_lsa(*space, words[i], inputs.paradigms));
        });
    }
    return results;
}

ThresholdCurve run_evaluation(const EvalInputs& inputs, const EvalConfig& config) {
    ThresholdCurve curve = evaluate(score_lexicon(inputs, config), inputs.lexicon, config.thresholds);
    curve.measure = std::string(measure_name(config.measure));
    if (config.measure == Measure::Pmi) {
        curve.epsilon = config.pmi.epsilon;
        curve.window = config.pmi.window;
        curve.form = std::string(form_name(config.form));
        curve.op = std::string(operator_name(config.pmi.op));
    } else {
        curve.k = config.k != 0 ? config.k : inputs.space->k();
    }
    return curve;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    if (name == "epsilon") return SweepParameter::Epsilon;
    if (name == "window") return SweepParameter::Window;
    if (name == "k") return SweepParameter::K;
    if (name == "form") return SweepParameter::Form;
    if (name == "operator") return SweepParameter::Operator;
    throw Error(Errc::InvalidConfig,
                fmt::format("unknown sweep parameter '{}' (epsilon|window|k|form|operator)", name));
}

std::string_view sweep_parameter_name(SweepParameter p) noexcept {
    switch (p) {
        case SweepParameter::Epsilon: return "epsilon";
        case SweepParameter::Window: return "window";
        case SweepParameter::K: return "k";
        case SweepParameter::Form: return "form";
        case SweepParameter::Operator: return "operator";
    }
    return "?";
}

std::vector<ThresholdCurve> sweep(SweepParameter parameter, const std::vector<std::string>& values,
                                  const EvalInputs& inputs, const EvalConfig& base) {
    if (values.empty()) throw Error(Errc::InvalidConfig, "sweep needs at least one value");
    const bool lsa_param = parameter == SweepParameter::K;
    if (lsa_param != (base.measure == Measure::Lsa)) {
        throw Error(Errc::InvalidConfig, fmt::format("parameter '{}' does not apply to measure '{}'",
                                                     sweep_parameter_name(parameter), measure_name(base.measure)));
    }
    std::vector<ThresholdCurve> curves;
    for (const auto& raw : values) {
        EvalConfig cfg = base;
        std::string canonical;
        switch (parameter) {
            case SweepParameter::Epsilon:
                cfg.pmi.epsilon = parse_number<double>(raw, "epsilon");
                canonical = fmt::format("{}", cfg.pmi.epsilon);
                break;
            case SweepParameter::Window:
                cfg.pmi.window = parse_number<std::uint32_t>(raw, "window");
                canonical = fmt::format("{}", cfg.pmi.window);
                break;
            case SweepParameter::K:
                cfg.k = parse_number<int>(raw, "k");
                if (cfg.k < 1) throw Error(Errc::InvalidConfig, "k must be >= 1");
                canonical = fmt::format("{}", cfg.k);
                break;
            case SweepParameter::Form:
                cfg.form = parse_form(raw);
                canonical = std::string(form_name(cfg.form));
                break;
            case SweepParameter::Operator:
                cfg.pmi.op = parse_operator(raw);
                canonical = std::string(operator_name(cfg.pmi.op));
                break;
        }
        ThresholdCurve c = run_evaluation(inputs, cfg);
        c.parameter = std::string(sweep_parameter_name(parameter));
        c.value = std::move(canonical);
        curves.push_back(std::move(c));
    }
    return curves;
}

std::string frequency_match(std::string_view word, Label target, const Lexicon& lexicon, const HitSource& hits,
                            const std::vector<std::string>& exclude) {
    const std::uint64_t reference = hits.hits(Query::term(std::string(word)));
    const std::string* best = nullptr;
    std::uint64_t best_gap = 0;
    for (const auto& [candidate, label] : lexicon.entries) {
        if (label != target || candidate == word) continue;
        if (std::find(exclude.begin(), exclude.end(), candidate) != exclude.end()) continue;
        const std::uint64_t h = hits.hits(Query::term(candidate));
        const std::uint64_t gap = h > reference ? h - reference : reference - h;
        if (!best || gap < best_gap) {
            best = &candidate;
            best_gap = gap;
        }
    }
    if (!best) {
        throw Error(Errc::NoCandidate, fmt::format("no {} lexicon word to match '{}'", label_name(target), word));
    }
    return *best;
}

ParadigmSet match_paradigms(const ParadigmSet& original, const Lexicon& lexicon, const HitSource& hits) {
    std::vector<std::string> used;
    for (const auto* side : {&original.positive(), &original.negative()}) {
        used.insert(used.end(), side->begin(), side->end());
    }
    std::vector<std::string> pos;
    std::vector<std::string> neg;
    for (const auto& w : original.positive()) {
        pos.push_back(frequency_match(w, Label::Positive, lexicon, hits, used));
        used.push_back(pos.back());
    }
    for (const auto& w : original.negative()) {
        neg.push_back(frequency_match(w, Label::Negative, lexicon, hits, used));
        used.push_back(neg.back());
    }
    return ParadigmSet(std::move(pos), std::move(neg));
}

}  // namespace sorient
