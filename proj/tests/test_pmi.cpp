#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sorient/index.hpp"
#include "sorient/parallel.hpp"
#include "sorient/pmi.hpp"
#include "testutil.hpp"

using namespace sorient;
using doctest::Approx;

namespace {

PositionalIndex index_of(const oracle::Docs& docs) { return PositionalIndex::build(oracle::corpus_of(docs)); }

PmiConfig exact_mode() {
    PmiConfig c;
    c.epsilon = 0.0;
    c.allow_zero_epsilon = true;
    return c;
}

}  // namespace

TEST_CASE("pmi: perfect co-occurrence with unit marginals is zero") {
    const auto idx = index_of({{"x", "y"}, {"y", "x"}, {"x", "y", "z"}});
    CHECK(pmi(idx, "x", "y", exact_mode()) == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pmi: four-document hand count") {
    const auto idx = index_of({{"a", "b"}, {"a", "b"}, {"a", "c"}, {"c"}});
    CHECK(pmi(idx, "a", "b", exact_mode()) == Approx(std::log2(4.0 / 3.0)).epsilon(1e-12));
    CHECK(std::log2(4.0 / 3.0) == Approx(0.4150).epsilon(1e-4));
}

TEST_CASE("pmi: words that never meet have negative PMI under heavy smoothing") {
    const auto idx = index_of({{"a"}, {"a"}, {"b"}, {"b"}});
    PmiConfig c;
    c.epsilon = 1.0;
    CHECK(pmi(idx, "a", "b", c) < 0.0);
}

TEST_CASE("pmi: exact mode gives infinities on zero counts") {
    const auto idx = index_of({{"a"}, {"b"}});
    CHECK(pmi(idx, "a", "b", exact_mode()) == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(pmi(idx, "q", "r", exact_mode())));
}

TEST_CASE("config validation") {
    using testutil::error_code_of;
    PmiConfig c;
    c.epsilon = 0.0;
    CHECK(error_code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c.epsilon = -1.0;
    CHECK(error_code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c.epsilon = std::numeric_limits<double>::quiet_NaN();
    CHECK(error_code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c.epsilon = 0.01;
    c.window = 0;
    CHECK(error_code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    CHECK(error_code_of([] { parse_operator("between"); }) == Errc::InvalidConfig);
    CHECK(error_code_of([] { parse_form("sum"); }) == Errc::InvalidConfig);
    CHECK(parse_operator("and") == ProxOperator::And);
    CHECK(parse_form("disjunction") == SoForm::Disjunction);
}

TEST_CASE("so product: five-document hand count") {
    const auto idx = index_of({{"w", "p"}, {"w", "p"}, {"w", "n"}, {"p"}, {"n"}});
    const ParadigmSet ps({"p"}, {"n"});
    CHECK(so_pmi_product(idx, "w", ps, exact_mode()) == Approx(std::log2(4.0 / 3.0)).epsilon(1e-12));
    // The same value through the generic combinator.
    const auto assoc = [&](std::string_view a, const std::string& b) { return pmi(idx, a, b, exact_mode()); };
    CHECK(so_a(assoc, "w", ps) == Approx(std::log2(4.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("so product: symmetric profile and balanced marginals give zero") {
    const auto idx = index_of({{"w", "p"}, {"w", "n"}, {"p"}, {"n"}});
    const ParadigmSet ps({"p"}, {"n"});
    CHECK(so_pmi_product(idx, "w", ps, PmiConfig{}) == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("so product: unknown word is set by the paradigm marginals") {
    const auto idx = index_of({{"p"}, {"p", "x"}, {"n"}, {"p", "n"}});
    const ParadigmSet ps({"p"}, {"n"});
    const PmiConfig c;
    const double expect = std::log2((2 + c.epsilon) / (3 + c.epsilon));
    CHECK(so_pmi_product(idx, "unseen", ps, c) == Approx(expect).epsilon(1e-12));
    CHECK(std::isfinite(so_pmi_product(idx, "unseen", ps, c)));
}

TEST_CASE("so disjunction: singletons equal the product form") {
    Xoshiro256 rng(9);
    for (int t = 0; t < 50; ++t) {
        const auto docs = oracle::random_docs(rng);
        const auto idx = index_of(docs);
        const auto vocab = oracle::vocab_size(docs);
        if (vocab < 3) continue;
        const ParadigmSet ps({"t0"}, {"t1"});
        const PmiConfig c;
        for (std::size_t w = 0; w < vocab; ++w) {
            const auto word = oracle::vocab_word(w);
            CHECK(so_pmi_disjunction(idx, word, ps, c) == Approx(so_pmi_product(idx, word, ps, c)).epsilon(1e-12));
        }
    }
}

TEST_CASE("so disjunction: absent word depends only on the group marginals") {
    const auto idx = index_of({{"a"}, {"b", "a"}, {"c"}, {"d", "q"}});
    const ParadigmSet ps({"a", "b"}, {"c", "d"});
    const PmiConfig c;
    const double expect = std::log2((2 + c.epsilon) / (2 + c.epsilon));
    CHECK(so_pmi_disjunction(idx, "nothere", ps, c) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("both forms match brute-force recomputation on random corpora") {
    Xoshiro256 rng(123);
    for (int t = 0; t < 150; ++t) {
        const auto docs = oracle::random_docs(rng);
        const auto idx = index_of(docs);
        const auto vocab = oracle::vocab_size(docs);
        const ParadigmSet ps = oracle::random_paradigms(rng, vocab, rng.below(2) == 0);
        oracle::PmiSettings s;
        s.window = static_cast<std::uint32_t>(1 + rng.below(12));
        s.use_and = rng.below(4) == 0;
        s.eps = rng.below(2) == 0 ? 0.01 : 0.5;
        PmiConfig cfg;
        cfg.window = s.window;
        cfg.op = s.use_and ? ProxOperator::And : ProxOperator::Near;
        cfg.epsilon = s.eps;
        const SoPmi product(idx, ps, cfg, SoForm::Product);
        const SoPmi disjunction(idx, ps, cfg, SoForm::Disjunction);
        for (std::size_t w = 0; w <= vocab; ++w) {
            const auto word = w == vocab ? std::string("zz") : oracle::vocab_word(w);
            CHECK(product(word) == Approx(oracle::so_product(docs, word, ps, s)).epsilon(1e-9));
            CHECK(disjunction(word) == Approx(oracle::so_disjunction(docs, word, ps, s)).epsilon(1e-9));
            const auto other = oracle::vocab_word(rng.below(vocab));
            CHECK(pmi(idx, word, other, cfg) == Approx(oracle::pmi(docs, word, other, s)).epsilon(1e-9));
        }
    }
}

TEST_CASE("balanced paradigms: product form equals the sum of PMI differences") {
    Xoshiro256 rng(31);
    for (int t = 0; t < 100; ++t) {
        const auto docs = oracle::random_docs(rng);
        const auto idx = index_of(docs);
        const auto vocab = oracle::vocab_size(docs);
        const ParadigmSet ps = oracle::random_paradigms(rng, vocab, true);
        const PmiConfig cfg;
        const auto assoc = [&](std::string_view a, const std::string& b) { return pmi(idx, a, b, cfg); };
        for (std::size_t w = 0; w < vocab; ++w) {
            const auto word = oracle::vocab_word(w);
            CHECK(std::fabs(so_pmi_product(idx, word, ps, cfg) - so_a(assoc, word, ps)) <= 1e-9);
        }
    }
}

TEST_CASE("swapping the paradigm lists negates both forms exactly") {
    Xoshiro256 rng(55);
    for (int t = 0; t < 100; ++t) {
        const auto docs = oracle::random_docs(rng);
        const auto idx = index_of(docs);
        const auto vocab = oracle::vocab_size(docs);
        const ParadigmSet ps = oracle::random_paradigms(rng, vocab, rng.below(2) == 0);
        const PmiConfig cfg;
        for (const auto form : {SoForm::Product, SoForm::Disjunction}) {
            const SoPmi a(idx, ps, cfg, form);
            const SoPmi b(idx, ps.swapped(), cfg, form);
            for (std::size_t w = 0; w < vocab; ++w) {
                const auto word = oracle::vocab_word(w);
                CHECK(b(word) == -a(word));
            }
        }
    }
}

TEST_CASE("huge smoothing drives every SO towards zero") {
    Xoshiro256 rng(66);
    for (int t = 0; t < 50; ++t) {
        const auto docs = oracle::random_docs(rng);
        const auto idx = index_of(docs);
        const auto vocab = oracle::vocab_size(docs);
        const ParadigmSet ps = oracle::random_paradigms(rng, vocab, false);
        PmiConfig cfg;
        cfg.epsilon = 1e6;
        for (std::size_t w = 0; w < vocab; ++w) {
            CHECK(std::fabs(so_pmi_product(idx, oracle::vocab_word(w), ps, cfg)) <= 1e-3);
            CHECK(std::fabs(so_pmi_disjunction(idx, oracle::vocab_word(w), ps, cfg)) <= 1e-3);
        }
    }
}

TEST_CASE("query budget per word: 14 for products, 2 for disjunctions") {
    Xoshiro256 rng(1);
    const auto docs = oracle::random_docs(rng, 40, 30, 30);
    const auto idx = index_of(docs);
    const ParadigmSet ps = ParadigmSet::defaults();
    for (const auto& [form, per_word] : {std::pair{SoForm::Product, 14u}, std::pair{SoForm::Disjunction, 2u}}) {
        CountingHitSource counted(idx);
        const SoPmi s(counted, ps, PmiConfig{}, form);
        const auto setup = counted.queries();
        CHECK(s.queries_per_word() == per_word);
        for (int w = 0; w < 10; ++w) {
            const auto before = counted.queries();
            (void)s(oracle::vocab_word(static_cast<std::size_t>(w)));
            CHECK(counted.queries() - before == per_word);
        }
        CHECK(counted.queries() == setup + 10 * per_word);
    }
}

TEST_CASE("parallel scoring matches serial scoring") {
    Xoshiro256 rng(2);
    const auto docs = oracle::random_docs(rng, 50, 30, 40);
    const auto idx = index_of(docs);
    const SoPmi s(idx, oracle::random_paradigms(rng, oracle::vocab_size(docs), false), PmiConfig{});
    std::vector<double> serial(30), par(30);
    for (std::size_t i = 0; i < 30; ++i) serial[i] = s(oracle::vocab_word(i));
    parallel_for(30, 8, [&](std::size_t i) { par[i] = s(oracle::vocab_word(i)); });
    CHECK(serial == par);
}

TEST_CASE("proximity query shape follows the operator") {
    PmiConfig c;
    c.window = 4;
    CHECK(proximity_query("a", Query::term("b"), c) == Query::near(Query::term("a"), Query::term("b"), 4));
    c.op = ProxOperator::And;
    CHECK(proximity_query("a", Query::term("b"), c) == Query::all_of(Query::term("a"), Query::term("b")));
}
