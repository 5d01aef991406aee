#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "sorient/evalharness.hpp"
#include "sorient/syngen.hpp"
#include "testutil.hpp"

using namespace sorient;
using testutil::error_code_of;

namespace {

const ParadigmSet kNone({"__p"}, {"__n"});

Lexicon lex_of(std::initializer_list<std::pair<const char*, Label>> entries) {
    Lexicon l;
    for (const auto& [w, lab] : entries) l.entries.emplace(w, lab);
    return l;
}

// Independent sort-and-count reference.
std::vector<CurvePoint> reference_curve(std::vector<OrientationResult> results, const Lexicon& lex,
                                        const std::vector<double>& thresholds) {
    std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
        return std::make_pair(-std::fabs(a.so), a.word) < std::make_pair(-std::fabs(b.so), b.word);
    });
    std::vector<CurvePoint> out;
    const std::size_t n = results.size();
    for (const double p : thresholds) {
        std::size_t c = 0;
        while (static_cast<double>(c) * 100.0 < p * static_cast<double>(n) - 1e-7) ++c;
        c = std::max<std::size_t>(c, 1);
        std::size_t right = 0;
        for (std::size_t i = 0; i < c; ++i) {
            const Label truth = lex.entries.at(results[i].word);
            right += (results[i].so > 0 ? Label::Positive : Label::Negative) == truth ? 1 : 0;
        }
        out.push_back({p, c, static_cast<double>(right) / static_cast<double>(c)});
    }
    return out;
}

}  // namespace

TEST_CASE("tsv lexicon parsing") {
    const auto l = parse_lexicon("abide\tpositive\nabandon\tnegative\n", LexiconFormat::Tsv, kNone);
    CHECK(l.size() == 2);
    CHECK(l.label_of("abide") == Label::Positive);
    CHECK(l.label_of("abandon") == Label::Negative);
    const auto c = parse_lexicon("# comment\n\nAbide\tpositive\r\nabide\tpositive\n", LexiconFormat::Tsv, kNone);
    CHECK(c.size() == 1);
}

TEST_CASE("tsv lexicon drops paradigm words") {
    const auto l = parse_lexicon("good\tpositive\nabide\tpositive\n", LexiconFormat::Tsv, ParadigmSet::defaults());
    CHECK(l.size() == 1);
    CHECK(l.dropped_paradigms == 1);
    CHECK_FALSE(l.contains("good"));
}

TEST_CASE("tsv lexicon errors carry line numbers") {
    try {
        parse_lexicon("a\tpositive\nb positive\n", LexiconFormat::Tsv, kNone);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedLine);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK(error_code_of([] { parse_lexicon("a\tgood\n", LexiconFormat::Tsv, kNone); }) == Errc::MalformedLine);
    CHECK(error_code_of([] { parse_lexicon("two words\tpositive\n", LexiconFormat::Tsv, kNone); }) ==
          Errc::MalformedLine);
    CHECK(error_code_of([] { parse_lexicon("a\tpositive\na\tnegative\n", LexiconFormat::Tsv, kNone); }) ==
          Errc::ConflictingLabel);
    CHECK(error_code_of([] { load_lexicon("/no/such/lexicon.tsv", LexiconFormat::Tsv, kNone); }) ==
          Errc::MissingPath);
}

TEST_CASE("gi-raw lexicon: senses, duplicates and ambiguity") {
    const std::string gi =
        "Entry\tSource\tPositiv\tNegativ\tOther\n"
        "ABANDON\tH4Lvd\t\tNegativ\tNtrj\n"
        "ABIDE\tH4Lvd\tPositiv\t\t\n"
        "MIND#9\tH4\t\tNegativ\t\n"
        "MIND#10\tH4\tPositiv\t\t\n"
        "ABLE#1\tH4\tPositiv\t\t\n"
        "ABLE#2\tH4\tPositiv\t\t\n"
        "TABLE\tH4\t\t\tNoun\n"
        "GOOD#1\tH4\tPositiv\t\t\n";
    const auto l = parse_lexicon(gi, LexiconFormat::GiRaw, ParadigmSet::defaults());
    CHECK(l.size() == 3);
    CHECK(l.label_of("abandon") == Label::Negative);
    CHECK(l.label_of("abide") == Label::Positive);
    CHECK(l.label_of("able") == Label::Positive);
    CHECK_FALSE(l.contains("mind"));
    CHECK_FALSE(l.contains("table"));
    CHECK(l.dropped_ambiguous == 1);
    CHECK(l.dropped_paradigms == 1);
    CHECK(parse_lexicon("ABIDE Positiv\nABASE Negativ\n", LexiconFormat::GiRaw, kNone).size() == 2);
}

TEST_CASE("evaluate: hand example") {
    const auto lex = lex_of({{"a", Label::Positive}, {"b", Label::Negative}, {"c", Label::Positive}});
    std::vector<OrientationResult> r{make_result("a", 3.0), make_result("b", -2.0), make_result("c", -1.0)};
    const auto curve = evaluate(r, lex, {100.0, 200.0 / 3.0});
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.points[0].classified_count == 3);
    CHECK(curve.points[0].accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(curve.points[1].classified_count == 2);
    CHECK(curve.points[1].accuracy == 1.0);
    CHECK(curve.test_set_size == 3);
}

TEST_CASE("evaluate: all correct, ties broken by word, errors") {
    const auto lex = lex_of({{"a", Label::Positive}, {"b", Label::Negative}, {"z", Label::Positive}});
    std::vector<OrientationResult> r{make_result("z", 1.0), make_result("b", 1.0), make_result("a", 1.0)};
    for (const auto& p : evaluate(r, lex, step_thresholds(5)).points) {
        if (p.classified_count == 1) CHECK(p.accuracy == 1.0);  // "a" ranks first
    }
    const auto ok = lex_of({{"a", Label::Positive}, {"b", Label::Negative}});
    for (const auto& p : evaluate({make_result("a", 0.1), make_result("b", -5)}, ok, default_thresholds()).points) {
        CHECK(p.accuracy == 1.0);
    }
    CHECK(error_code_of([&] { evaluate({}, lex, default_thresholds()); }) == Errc::EmptyResults);
    CHECK(error_code_of([&] { evaluate({make_result("q", 1)}, lex, default_thresholds()); }) == Errc::UnknownWord);
    CHECK(error_code_of([&] { evaluate(r, lex, {0.0}); }) == Errc::InvalidConfig);
    CHECK(error_code_of([&] { evaluate(r, lex, {101.0}); }) == Errc::InvalidConfig);
}

TEST_CASE("evaluate matches an independent reference and ignores input order") {
    Xoshiro256 rng(12);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng.below(60);
        Lexicon lex;
        std::vector<OrientationResult> results;
        for (std::size_t i = 0; i < n; ++i) {
            const auto w = oracle::vocab_word(i);
            lex.entries.emplace(w, rng.below(2) ? Label::Positive : Label::Negative);
            // Coarse values so ties are common.
            results.push_back(make_result(w, static_cast<double>(static_cast<int>(rng.below(9)) - 4)));
        }
        const auto thresholds = rng.below(2) ? step_thresholds(5) : default_thresholds();
        const auto curve = evaluate(results, lex, thresholds);
        const auto expect = reference_curve(results, lex, thresholds);
        REQUIRE(curve.points.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i) {
            CHECK(curve.points[i].classified_count == expect[i].classified_count);
            CHECK(curve.points[i].accuracy == expect[i].accuracy);
            CHECK(curve.points[i].accuracy >= 0.0);
            CHECK(curve.points[i].accuracy <= 1.0);
            if (i > 0) CHECK(curve.points[i].classified_count >= curve.points[i - 1].classified_count);
        }
        std::size_t right = 0;
        for (const auto& r : results) right += r.label == lex.entries.at(r.word) ? 1 : 0;
        CHECK(curve.points.back().accuracy == static_cast<double>(right) / static_cast<double>(n));
        for (std::size_t i = results.size(); i > 1; --i) std::swap(results[i - 1], results[rng.below(i)]);
        const auto shuffled = evaluate(results, lex, thresholds);
        for (std::size_t i = 0; i < expect.size(); ++i) CHECK(shuffled.points[i].accuracy == curve.points[i].accuracy);
    }
}

TEST_CASE("threshold helpers") {
    CHECK(classified_count(75, 1336) == 1002);
    CHECK(classified_count(25, 10) == 3);
    CHECK(classified_count(100, 7) == 7);
    CHECK(classified_count(0.001, 7) == 1);
    const auto s = step_thresholds(5);
    CHECK(s.size() == 20);
    CHECK(s.front() == 5.0);
    CHECK(s.back() == 100.0);
    CHECK(step_thresholds(30) == std::vector<double>{30, 60, 90, 100});
    CHECK(error_code_of([] { step_thresholds(0); }) == Errc::InvalidConfig);
}

TEST_CASE("CSV layout") {
    ThresholdCurve c;
    c.parameter = "window";
    c.value = "5";
    c.points = {{25, 3, 1.0}, {100, 10, 0.7}};
    CHECK(curves_to_csv({c}) ==
          "parameter,value,threshold_percent,classified_count,accuracy\nwindow,5,25,3,1\nwindow,5,100,10,0.7\n");
}

TEST_CASE("swap test set") {
    const auto lex = lex_of({{"alpha", Label::Positive}, {"beta", Label::Negative}, {"gamma", Label::Positive}});
    const ParadigmSet original({"good"}, {"bad"});
    const ParadigmSet replacement({"alpha"}, {"beta"});
    const auto s = swap_test_set(lex, replacement, original);
    CHECK(s.size() == 3);
    CHECK(s.label_of("good") == Label::Positive);
    CHECK(s.label_of("bad") == Label::Negative);
    CHECK_FALSE(s.contains("alpha"));
    CHECK(s.contains("gamma"));
}

namespace {

struct Fixture {
    GeneratedCorpus gen;
    PositionalIndex index;
    LsaSpace space;
    Fixture()
        : gen(generate([] {
              GenSpec s;
              s.n_docs = 600;
              s.planted_per_polarity = 40;
              s.noise_vocab = 300;
              s.doc_len = 30;
              return s;
          }())),
          index(PositionalIndex::build(gen.corpus)),
          space(build_space(gen.corpus, 40)) {}
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

}  // namespace

TEST_CASE("sweeps: one curve per value over one test set") {
    const auto& f = fixture();
    EvalInputs in;
    in.hits = &f.index;
    in.lexicon = f.gen.lexicon;
    EvalConfig cfg;
    const auto curves = sweep(SweepParameter::Window, {"5", "10"}, in, cfg);
    REQUIRE(curves.size() == 2);
    CHECK(curves[0].test_set_size == curves[1].test_set_size);
    CHECK(curves[0].value == "5");
    CHECK(curves[0].window == 5);
    CHECK(curves[1].parameter == "window");

    const auto eps = sweep(SweepParameter::Epsilon, {"1e6"}, in, cfg);
    CHECK(eps[0].value == "1000000");
    for (const auto& r : score_lexicon(in, [&] {
             EvalConfig c = cfg;
             c.pmi.epsilon = 1e6;
             return c;
         }())) {
        CHECK(std::fabs(r.so) <= 1e-3);
    }
    const auto forms = sweep(SweepParameter::Form, {"product", "disjunction"}, in, cfg);
    CHECK(forms[1].form == "disjunction");
    const auto ops = sweep(SweepParameter::Operator, {"and"}, in, cfg);
    CHECK(ops[0].op == "and");
    CHECK(error_code_of([&] { sweep(SweepParameter::Window, {"x"}, in, cfg); }) == Errc::InvalidConfig);
    CHECK(error_code_of([&] { sweep(SweepParameter::Window, {}, in, cfg); }) == Errc::InvalidConfig);
    CHECK(error_code_of([&] { sweep(SweepParameter::K, {"3"}, in, cfg); }) == Errc::InvalidConfig);
}

TEST_CASE("k sweep of one value equals a direct evaluation") {
    const auto& f = fixture();
    EvalInputs in;
    in.space = &f.space;
    in.lexicon = f.gen.lexicon;
    EvalConfig cfg;
    cfg.measure = Measure::Lsa;
    const auto direct = run_evaluation(in, cfg);
    const auto swept = sweep(SweepParameter::K, {std::to_string(f.space.k())}, in, cfg);
    REQUIRE(swept.size() == 1);
    REQUIRE(swept[0].points.size() == direct.points.size());
    for (std::size_t i = 0; i < direct.points.size(); ++i) {
        CHECK(swept[0].points[i].accuracy == direct.points[i].accuracy);
        CHECK(swept[0].points[i].classified_count == direct.points[i].classified_count);
    }
    const auto k10 = sweep(SweepParameter::K, {"10"}, in, cfg);
    CHECK(k10[0].k == 10);
}

TEST_CASE("scoring is independent of thread count and respects the budget") {
    const auto& f = fixture();
    EvalInputs in;
    in.hits = &f.index;
    in.lexicon = f.gen.lexicon;
    EvalConfig one;
    EvalConfig many;
    many.threads = 8;
    const auto a = score_lexicon(in, one);
    const auto b = score_lexicon(in, many);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].word == b[i].word);
        CHECK(a[i].so == b[i].so);
    }
    EvalConfig tight;
    tight.max_queries = 20;
    CHECK(error_code_of([&] { score_lexicon(in, tight); }) == Errc::QueryBudgetExceeded);
    EvalConfig enough;
    enough.max_queries = 14 + 14 * in.lexicon.size();
    CHECK(score_lexicon(in, enough).size() == in.lexicon.size());
}

TEST_CASE("frequency match minimises the hit gap") {
    const auto& f = fixture();
    const auto& lex = f.gen.lexicon;
    for (const auto& [word, label] : lex.entries) {
        for (const Label target : {Label::Positive, Label::Negative}) {
            const auto m = frequency_match(word, target, lex, f.index);
            CHECK(m != word);
            CHECK(lex.label_of(m) == target);
            const auto gap = [&](const std::string& c) {
                const auto a = f.index.df(c);
                const auto b = f.index.df(word);
                return a > b ? a - b : b - a;
            };
            for (const auto& [c, l] : lex.entries) {
                if (l != target || c == word) continue;
                CHECK(gap(m) <= gap(c));
                if (gap(c) == gap(m)) CHECK(m <= c);
            }
        }
    }
}

TEST_CASE("frequency match: forced candidate and no candidate") {
    const auto idx = PositionalIndex::build(make_corpus({"a b c", "a"}, {"", ""}));
    const auto lex = lex_of({{"a", Label::Positive}, {"b", Label::Negative}, {"c", Label::Positive}});
    CHECK(frequency_match("a", Label::Negative, lex, idx) == "b");
    CHECK(frequency_match("a", Label::Positive, lex, idx) == "c");
    CHECK(error_code_of([&] { frequency_match("b", Label::Negative, lex, idx); }) == Errc::NoCandidate);
    CHECK(error_code_of([&] { frequency_match("a", Label::Negative, lex, idx, {"b"}); }) == Errc::NoCandidate);
}

TEST_CASE("match_paradigms uses each replacement once") {
    const auto& f = fixture();
    const auto m = match_paradigms(ParadigmSet::defaults(), f.gen.lexicon, f.index);
    CHECK(m.positive().size() == 7);
    CHECK(m.negative().size() == 7);
    for (const auto& w : m.positive()) CHECK(f.gen.lexicon.label_of(w) == Label::Positive);
    for (const auto& w : m.negative()) CHECK(f.gen.lexicon.label_of(w) == Label::Negative);
}

TEST_CASE("lsa evaluation skips words missing from the space") {
    const auto& f = fixture();
    EvalInputs in;
    in.space = &f.space;
    in.lexicon = f.gen.lexicon;
    in.lexicon.entries.emplace("notinspace", Label::Positive);
    EvalConfig cfg;
    cfg.measure = Measure::Lsa;
    std::size_t skipped = 0;
    const auto r = score_lexicon(in, cfg, &skipped);
    CHECK(skipped >= 1);
    CHECK(r.size() + skipped == in.lexicon.size());
    EvalInputs none;
    none.lexicon = in.lexicon;
    CHECK(error_code_of([&] { score_lexicon(none, cfg); }) == Errc::InvalidConfig);
}
