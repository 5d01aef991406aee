// sorient: command-line front end for indexing, scoring and evaluation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sorient/corpus.hpp"
#include "sorient/error.hpp"
#include "sorient/evalharness.hpp"
#include "sorient/index.hpp"
#include "sorient/lsa.hpp"
#include "sorient/orientation.hpp"
#include "sorient/pmi.hpp"
#include "sorient/query.hpp"
#include "sorient/scorer.hpp"
#include "sorient/syngen.hpp"

namespace {

using namespace sorient;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct Globals {
    unsigned threads = 1;
    bool verbose = false;
    std::optional<std::uint64_t> max_queries;
};

void note(const Globals& g, const std::string& msg) {
    if (g.verbose) std::cerr << msg << '\n';
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error(Errc::Io, fmt::format("cannot open '{}' for writing", out_path));
    f << content;
    if (!f) throw Error(Errc::Io, fmt::format("failed writing '{}'", out_path));
}

ParadigmSet paradigms_from(const std::string& path) {
    return path.empty() ? ParadigmSet::defaults() : ParadigmSet::load(path);
}

std::vector<std::string> read_word_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::MissingPath, fmt::format("cannot read word list '{}'", path));
    std::vector<std::string> words;
    std::string line;
    while (std::getline(f, line)) {
        const auto first = line.substr(0, line.find('\t'));
        if (first.empty() || first.front() == '#') continue;
        for (auto& t : tokenize(first)) words.push_back(std::move(t));
    }
    return words;
}

// Options shared by every command that computes SO.
struct MeasureOptions {
    std::string measure = "pmi";
    std::string index;
    std::string space;
    std::string paradigms;
    double epsilon = 0.01;
    std::uint32_t window = kDefaultWindow;
    std::string op = "near";
    std::string form = "product";
    int k = 0;
    std::string rows;

    void add_to(CLI::App* app) {
        app->add_option("--measure", measure, "pmi or lsa")
            ->capture_default_str()
            ->check(CLI::IsMember({"pmi", "lsa"}));
        app->add_option("--index", index, "SOIX index file (pmi)");
        app->add_option("--space", space, "SOLS space file (lsa)");
        app->add_option("--paradigms", paradigms, "paradigm file (default: the 7+7 built-in words)");
        app->add_option("--epsilon", epsilon, "smoothing added to every hit count")->capture_default_str();
        app->add_option("--window", window, "NEAR window in tokens")->capture_default_str();
        app->add_option("--operator", op, "near or and")->capture_default_str();
        app->add_option("--form", form, "product (14 queries/word) or disjunction (2)")->capture_default_str();
        app->add_option("--k", k, "use the leading k dimensions of the space (0 = all it has; built with 300)")
            ->capture_default_str();
        app->add_option("--rows", rows, "compare uksigma or uk rows (default: as stored, uksigma)");
    }

    Measure parsed_measure() const {
        const Measure m = parse_measure(measure);
        if (m == Measure::Pmi && (index.empty() || !space.empty())) {
            throw Error(Errc::InvalidConfig, "--measure pmi needs --index and no --space");
        }
        if (m == Measure::Lsa && (space.empty() || !index.empty())) {
            throw Error(Errc::InvalidConfig, "--measure lsa needs --space and no --index");
        }
        return m;
    }

    PmiConfig pmi_config() const {
        PmiConfig c;
        c.epsilon = epsilon;
        c.window = window;
        c.op = parse_operator(op);
        c.validate();
        return c;
    }
};

// Loaded resources for a measure.
struct Backend {
    std::unique_ptr<PositionalIndex> index;
    std::unique_ptr<LsaSpace> space;
};

Backend load_backend(const MeasureOptions& mo, Measure m) {
    Backend b;
    if (m == Measure::Pmi) {
        b.index = std::make_unique<PositionalIndex>(PositionalIndex::load(mo.index));
    } else {
        LsaSpace s = LsaSpace::load(mo.space);
        if (!mo.rows.empty()) s = s.with_row_scaling(parse_row_scaling(mo.rows));
        if (mo.k != 0 && mo.k != s.k()) s = s.truncated(mo.k);
        b.space = std::make_unique<LsaSpace>(std::move(s));
    }
    return b;
}

EvalConfig eval_config(const MeasureOptions& mo, Measure m, const Globals& g) {
    EvalConfig c;
    c.measure = m;
    if (m == Measure::Pmi) {
        c.pmi = mo.pmi_config();
        c.form = parse_form(mo.form);
    }
    c.threads = g.threads;
    c.max_queries = g.max_queries;
    return c;
}

std::string format_so(double so) { return fmt::format("{}", so); }

int run_build_index(const Globals& g, const std::string& corpus, const std::string& format, const std::string& out,
                    const std::string& json_out) {
    const Corpus c = load_corpus(corpus, parse_corpus_format(format), g.threads);
    const PositionalIndex idx = PositionalIndex::build(c, g.threads);
    idx.save(out);
    if (!json_out.empty()) emit(json_out, idx.to_json().dump(1) + "\n");
    note(g, fmt::format("indexed {} documents, {} terms", c.size(), idx.terms().size()));
    return 0;
}

int run_build_lsa(const Globals& g, const std::string& corpus, const std::string& format, int k,
                  std::size_t min_df, const std::string& weighting, const std::string& rows, std::uint64_t seed,
                  const std::string& out) {
    const Corpus c = load_corpus(corpus, parse_corpus_format(format), g.threads);
    SvdOptions opt;
    opt.seed = seed;
    const LsaSpace s = build_space(c, k, min_df, parse_weighting(weighting), parse_row_scaling(rows), opt, g.threads);
    s.save(out);
    if (s.rank_deficient()) {
        std::cerr << fmt::format("warning: matrix supports only {} of the {} requested dimensions\n", s.k(), k);
    }
    note(g, fmt::format("space: {} terms, k={}", s.terms().size(), s.k()));
    return 0;
}

int run_hits(const Globals& g, const std::string& index, const std::vector<std::string>& queries) {
    const PositionalIndex idx = PositionalIndex::load(index);
    std::string out;
    for (const auto& text : queries) {
        const Query q = parse_query(text);
        out += fmt::format("{}\t{}\n", q.to_string(), idx.hits(q));
    }
    emit("", out);
    note(g, fmt::format("{} documents in index", idx.doc_count()));
    return 0;
}

int run_so(const Globals& g, const MeasureOptions& mo, std::vector<std::string> words, const std::string& words_file,
           const std::string& out) {
    if (!words_file.empty()) {
        auto more = read_word_file(words_file);
        words.insert(words.end(), more.begin(), more.end());
    }
    if (words.empty()) throw Error(Errc::InvalidConfig, "no words given (positional words or --words FILE)");
    const Measure m = mo.parsed_measure();
    const Backend b = load_backend(mo, m);
    const ParadigmSet paradigms = paradigms_from(mo.paradigms);
    std::string text = "word\tso\tlabel\n";
    if (m == Measure::Pmi) {
        CountingHitSource counted(*b.index, g.max_queries);
        const SoPmi scorer(counted, paradigms, mo.pmi_config(), parse_form(mo.form));
        const auto setup = counted.queries();
        for (const auto& w : words) {
            const double so = scorer(w);
            text += fmt::format("{}\t{}\t{}\n", w, format_so(so), label_name(classify(so)));
        }
        note(g, fmt::format("queries: {} setup + {} for {} words ({} per word)", setup, counted.queries() - setup,
                            words.size(), scorer.queries_per_word()));
    } else {
        for (const auto& w : words) {
            const double so = so_lsa(*b.space, w, paradigms);
            text += fmt::format("{}\t{}\t{}\n", w, format_so(so), label_name(classify(so)));
        }
    }
    emit(out, text);
    return 0;
}

struct EvalOptions {
    std::string lexicon;
    std::string lexicon_format = "tsv";
    std::string swap_paradigms;
    std::vector<double> thresholds;
    double step = 0.0;
    std::string sweep_param;
    std::vector<std::string> sweep_values;
    std::string out;

    void add_to(CLI::App* app, bool sweep_required) {
        app->add_option("--lexicon", lexicon, "labelled test words")->required();
        app->add_option("--lexicon-format", lexicon_format, "tsv or gi-raw")->capture_default_str();
        app->add_option("--swap-paradigms", swap_paradigms,
                        "evaluate with these paradigms; the default ones join the test set");
        app->add_option("--thresholds", thresholds, "percent thresholds (default 25 50 75 100)")->delimiter(',');
        app->add_option("--step", step, "thresholds every STEP percent instead");
        auto* p = app->add_option("--param,--sweep", sweep_param, "sweep epsilon|window|k|form|operator");
        auto* v = app->add_option("--values", sweep_values, "comma-separated sweep values")->delimiter(',');
        if (sweep_required) {
            p->required();
            v->required();
        }
        app->add_option("--out", out, "CSV output (default stdout)");
    }
};

int run_eval(const Globals& g, const MeasureOptions& mo, const EvalOptions& eo) {
    const Measure m = mo.parsed_measure();
    const Backend b = load_backend(mo, m);
    const ParadigmSet defaults = paradigms_from(mo.paradigms);
    EvalInputs in;
    in.hits = b.index.get();
    in.space = b.space.get();
    in.paradigms = defaults;
    in.lexicon = load_lexicon(eo.lexicon, parse_lexicon_format(eo.lexicon_format), defaults);
    if (!eo.swap_paradigms.empty()) {
        in.paradigms = ParadigmSet::load(eo.swap_paradigms);
        in.lexicon = swap_test_set(in.lexicon, in.paradigms, defaults);
    }
    note(g, fmt::format("test set: {} words ({} paradigm words dropped, {} ambiguous)", in.lexicon.size(),
                        in.lexicon.dropped_paradigms, in.lexicon.dropped_ambiguous));
    EvalConfig cfg = eval_config(mo, m, g);
    if (eo.step > 0.0) {
        cfg.thresholds = step_thresholds(eo.step);
    } else if (!eo.thresholds.empty()) {
        cfg.thresholds = eo.thresholds;
    }
    std::vector<ThresholdCurve> curves;
    if (!eo.sweep_param.empty()) {
        if (eo.sweep_values.empty()) throw Error(Errc::InvalidConfig, "--sweep needs --values");
        curves = sweep(parse_sweep_parameter(eo.sweep_param), eo.sweep_values, in, cfg);
    } else {
        curves.push_back(run_evaluation(in, cfg));
    }
    if (m == Measure::Lsa) {
        std::size_t skipped = 0;
        for (const auto& [w, l] : in.lexicon.entries) skipped += b.space->contains(w) ? 0 : 1;
        note(g, fmt::format("{} lexicon words are not in the space", skipped));
    }
    emit(eo.out, curves_to_csv(curves));
    return 0;
}

int run_score(const Globals& g, const MeasureOptions& mo, const std::string& so_table, const std::string& text,
              const std::string& out) {
    SoProvider provider;
    std::map<std::string, double, std::less<>> table;
    Backend b;
    std::unique_ptr<SoPmi> pmi;
    const ParadigmSet paradigms = paradigms_from(mo.paradigms);
    if (!so_table.empty()) {
        if (!mo.index.empty() || !mo.space.empty()) {
            throw Error(Errc::InvalidConfig, "give exactly one of --so-table, --index, --space");
        }
        table = load_so_table(so_table);
        provider = [&](std::string_view w) -> std::optional<double> {
            const auto it = table.find(w);
            if (it == table.end()) return std::nullopt;
            return it->second;
        };
    } else {
        const Measure m = mo.parsed_measure();
        b = load_backend(mo, m);
        if (m == Measure::Pmi) {
            pmi = std::make_unique<SoPmi>(*b.index, paradigms, mo.pmi_config(), parse_form(mo.form));
            provider = [&](std::string_view w) -> std::optional<double> {
                if (b.index->df(w) == 0) return std::nullopt;
                return pmi->score(w);
            };
        } else {
            provider = [&](std::string_view w) -> std::optional<double> {
                if (!b.space->contains(w)) return std::nullopt;
                return so_lsa(*b.space, w, paradigms);
            };
        }
    }
    const TextScore s = score_text(text, provider);
    emit(out, to_json(s).dump(2) + "\n");
    note(g, fmt::format("{} known tokens", s.known_word_count));
    return 0;
}

int run_gen(const Globals& g, const GenSpec& spec, bool no_noise, const std::string& out, const std::string& format,
            const std::string& lexicon_out, const std::string& alt_out) {
    const GenSpec effective = no_noise ? spec.without_noise() : spec;
    const GeneratedCorpus gen = generate(effective);
    write_corpus(gen.corpus, out, parse_corpus_format(format));
    if (!lexicon_out.empty()) emit(lexicon_out, gen.lexicon.to_tsv());
    if (!alt_out.empty()) {
        if (!gen.alt_paradigms) throw Error(Errc::InvalidSpec, "no secondary seeds were generated");
        emit(alt_out, gen.alt_paradigms->to_text());
    }
    note(g, fmt::format("generated {} documents, {} planted words", gen.corpus.size(), gen.lexicon.size()));
    return 0;
}

int run_paradigms(const Globals& g, bool print, bool match, const std::string& paradigms, const std::string& index,
                  const std::string& lexicon, const std::string& lexicon_format, const std::string& out) {
    const ParadigmSet base = paradigms_from(paradigms);
    if (print == match) throw Error(Errc::InvalidConfig, "give exactly one of --print and --match");
    if (print) {
        emit(out, base.to_text());
        return 0;
    }
    if (index.empty() || lexicon.empty()) throw Error(Errc::InvalidConfig, "--match needs --index and --lexicon");
    const PositionalIndex idx = PositionalIndex::load(index);
    const Lexicon lex = load_lexicon(lexicon, parse_lexicon_format(lexicon_format), base);
    const ParadigmSet matched = match_paradigms(base, lex, idx);
    emit(out, matched.to_text());
    if (g.verbose) {
        for (std::size_t i = 0; i < base.positive().size(); ++i) {
            note(g, fmt::format("{} ({}) -> {} ({})", base.positive()[i], idx.df(base.positive()[i]),
                                matched.positive()[i], idx.df(matched.positive()[i])));
        }
        for (std::size_t i = 0; i < base.negative().size(); ++i) {
            note(g, fmt::format("{} ({}) -> {} ({})", base.negative()[i], idx.df(base.negative()[i]),
                                matched.negative()[i], idx.df(matched.negative()[i])));
        }
    }
    return 0;
}

int exit_code_for(const Error& e) {
    switch (e.family()) {
        case ErrorFamily::Usage: return kExitUsage;
        case ErrorFamily::Numerical: return kExitNumerical;
        case ErrorFamily::Data: return kExitData;
    }
    return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic orientation from association: indexing, scoring and evaluation"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    std::uint64_t max_queries = 0;
    app.add_option("--threads", g.threads, "worker threads; results do not depend on it")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1024u));
    app.add_flag("--verbose,-v", g.verbose, "diagnostics on stderr");
    auto* budget = app.add_option("--max-queries", max_queries, "abort once this many hit queries have run");

    std::string corpus, format = "dir", out, json_out;
    auto* bi = app.add_subcommand("build-index", "index a corpus");
    bi->add_option("--corpus", corpus, "directory (one file per document) or lines file")->required();
    bi->add_option("--format", format, "dir or lines")->capture_default_str();
    bi->add_option("--out", out, "index file")->required();
    bi->add_option("--json-out", json_out, "also dump the postings as JSON");

    int lsa_k = kDefaultLsaDimensions;
    std::size_t min_df = kDefaultMinDf;
    std::string weighting = "log", rows = "uksigma";
    std::uint64_t svd_seed = SvdOptions{}.seed;
    auto* bl = app.add_subcommand("build-lsa", "build a reduced term space");
    bl->add_option("--corpus", corpus, "directory or lines file")->required();
    bl->add_option("--format", format, "dir or lines")->capture_default_str();
    bl->add_option("--k", lsa_k, "dimensions")->capture_default_str();
    bl->add_option("--min-df", min_df, "drop terms in fewer documents")->capture_default_str();
    bl->add_option("--weighting", weighting, "log or raw term frequency")->capture_default_str();
    bl->add_option("--rows", rows, "uksigma or uk term vectors")->capture_default_str();
    bl->add_option("--seed", svd_seed, "Lanczos start-vector seed")->capture_default_str();
    bl->add_option("--out", out, "space file")->required();

    std::string index;
    std::vector<std::string> queries;
    auto* hq = app.add_subcommand("hits", "count matching documents");
    hq->add_option("--index", index, "index file")->required();
    hq->add_option("queries", queries, "queries, e.g. 'excellent NEAR/10 (food OR wine)'")->required();

    MeasureOptions so_mo;
    std::vector<std::string> so_words;
    std::string words_file;
    auto* so = app.add_subcommand("so", "semantic orientation of words (TSV: word, so, label)");
    so_mo.add_to(so);
    so->add_option("word", so_words, "words to score");
    so->add_option("--words", words_file, "file with one word per line (first TSV column)");
    so->add_option("--out", out, "TSV output (default stdout)");

    MeasureOptions ev_mo;
    EvalOptions ev_eo;
    auto* ev = app.add_subcommand("eval", "accuracy against a lexicon at confidence thresholds (CSV)");
    ev_mo.add_to(ev);
    ev_eo.add_to(ev, false);

    MeasureOptions sw_mo;
    EvalOptions sw_eo;
    auto* sw = app.add_subcommand("sweep", "one evaluation per parameter value (CSV)");
    sw_mo.add_to(sw);
    sw_eo.add_to(sw, true);

    MeasureOptions sc_mo;
    std::string so_table, text;
    auto* sc = app.add_subcommand("score", "average orientation of a text (JSON)");
    sc_mo.add_to(sc);
    sc->add_option("--so-table", so_table, "TSV from `sorient so`");
    sc->add_option("--text", text, "text to score")->required();
    sc->add_option("--out", out, "JSON output (default stdout)");

    GenSpec spec;
    bool no_noise = false;
    std::string lexicon_out, alt_out;
    auto* gc = app.add_subcommand("gen-corpus", "synthetic corpus with planted orientation");
    gc->add_option("--seed", spec.seed, "generator seed")->capture_default_str();
    gc->add_option("--docs", spec.n_docs, "documents")->capture_default_str();
    gc->add_option("--doc-len", spec.doc_len, "tokens per document")->capture_default_str();
    gc->add_option("--planted", spec.planted_per_polarity, "planted words per polarity")->capture_default_str();
    gc->add_option("--alpha", spec.alpha, "same-polarity paradigm probability")->capture_default_str();
    gc->add_option("--noise-vocab", spec.noise_vocab, "noise word types")->capture_default_str();
    gc->add_option("--window", spec.window, "max planted-to-paradigm distance")->capture_default_str();
    gc->add_option("--background-positive", spec.background_positive, "extra positive paradigm rate")
        ->capture_default_str();
    gc->add_option("--background-negative", spec.background_negative, "extra negative paradigm rate")
        ->capture_default_str();
    gc->add_option("--alt-seeds", spec.alt_per_polarity, "secondary seeds per polarity")->capture_default_str();
    gc->add_option("--alt-alpha", spec.alt_alpha, "secondary seed same-polarity probability")->capture_default_str();
    gc->add_option("--alt-rate", spec.alt_rate, "secondary seed rate per document")->capture_default_str();
    gc->add_flag("--no-noise", no_noise, "no background paradigms, no secondary seeds");
    gc->add_option("--out", out, "output directory (or file with --format lines)")->required();
    gc->add_option("--format", format, "dir or lines")->capture_default_str();
    gc->add_option("--lexicon-out", lexicon_out, "planted ground truth (TSV)");
    gc->add_option("--alt-paradigms-out", alt_out, "secondary seeds as a paradigm file");

    bool print = false, match = false;
    std::string par_file, lexicon, lexicon_format = "tsv";
    auto* pa = app.add_subcommand("paradigms", "print or frequency-match paradigm words");
    pa->add_flag("--print", print, "print the paradigm set");
    pa->add_flag("--match", match, "replace each paradigm by the closest-frequency lexicon word");
    pa->add_option("--paradigms", par_file, "paradigm file (default: built-in)");
    pa->add_option("--index", index, "index for hit counts");
    pa->add_option("--lexicon", lexicon, "candidate words");
    pa->add_option("--lexicon-format", lexicon_format, "tsv or gi-raw")->capture_default_str();
    pa->add_option("--out", out, "output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }
    if (budget->count() > 0) g.max_queries = max_queries;

    try {
        if (*bi) return run_build_index(g, corpus, format, out, json_out);
        if (*bl) return run_build_lsa(g, corpus, format, lsa_k, min_df, weighting, rows, svd_seed, out);
        if (*hq) return run_hits(g, index, queries);
        if (*so) return run_so(g, so_mo, so_words, words_file, out);
        if (*ev) return run_eval(g, ev_mo, ev_eo);
        if (*sw) return run_eval(g, sw_mo, sw_eo);
        if (*sc) return run_score(g, sc_mo, so_table, text, out);
        if (*gc) return run_gen(g, spec, no_noise, out, format, lexicon_out, alt_out);
        if (*pa) return run_paradigms(g, print, match, par_file, index, lexicon, lexicon_format, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
