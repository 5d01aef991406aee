#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "testutil.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs the CLI with `args` (already shell-quoted where needed).
Run cli(const testutil::TempDir& dir, const std::string& args) {
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd =
        std::string("'") + SORIENT_CLI + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = testutil::read_file(out);
    r.err = testutil::read_file(err);
    return r;
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (const char c : s) n += c == '\n' ? 1 : 0;
    return n;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("paradigms --print lists the fourteen built-in words") {
    testutil::TempDir dir;
    const auto r = cli(dir, "paradigms --print");
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 16);
    CHECK(r.out.rfind("[positive]\ngood\n", 0) == 0);
    CHECK(r.out.find("[negative]\nbad\n") != std::string::npos);
}

TEST_CASE("usage errors exit 2 with help on stderr") {
    testutil::TempDir dir;
    const auto r = cli(dir, "so --no-such-flag");
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(cli(dir, "").code == 2);
    CHECK(cli(dir, "eval --index x").code == 2);  // --lexicon is required
    CHECK(cli(dir, "--threads 0 paradigms --print").code == 2);
}

TEST_CASE("help shows defaults") {
    testutil::TempDir dir;
    const auto r = cli(dir, "so --help");
    CHECK(r.code == 0);
    CHECK(r.out.find("[0.01]") != std::string::npos);
    CHECK(r.out.find("[10]") != std::string::npos);
    CHECK(cli(dir, "build-lsa --help").out.find("[300]") != std::string::npos);
}

TEST_CASE("data and numerical errors have their own exit codes") {
    testutil::TempDir dir;
    CHECK(cli(dir, "hits --index " + q(dir / "missing.soix") + " good").code == 3);
    testutil::write_file(dir / "bad.soix", "not an index");
    CHECK(cli(dir, "hits --index " + q(dir / "bad.soix") + " good").code == 3);
    testutil::write_file(dir / "c.txt", "good film\nbad film\n");
    REQUIRE(cli(dir, "build-index --corpus " + q(dir / "c.txt") + " --format lines --out " + q(dir / "i.soix")).code ==
            0);
    CHECK(cli(dir, "hits --index " + q(dir / "i.soix") + " 'good AND'").code == 2);
    CHECK(cli(dir, "--max-queries 3 so --index " + q(dir / "i.soix") + " film").code == 3);
    testutil::write_file(dir / "t.tsv", "film\tnan\n");
    CHECK(cli(dir, "score --so-table " + q(dir / "t.tsv") + " --text 'film'").code == 4);
}

TEST_CASE("hits prints canonical query and count") {
    testutil::TempDir dir;
    testutil::write_file(dir / "c.txt", "good service\nbad service\ngood good\n");
    REQUIRE(cli(dir, "build-index --corpus " + q(dir / "c.txt") + " --format lines --out " + q(dir / "i.soix")).code ==
            0);
    const auto r = cli(dir, "hits --index " + q(dir / "i.soix") + " good 'good NEAR service'");
    CHECK(r.code == 0);
    CHECK(r.out == "good\t2\ngood NEAR/10 service\t1\n");
}

TEST_CASE("full pipeline: generate, index, score, evaluate, sweep, text score") {
    testutil::TempDir dir;
    const std::string gen = "gen-corpus --docs 600 --planted 30 --noise-vocab 200 --doc-len 30 --out " +
                            q(dir / "corpus") + " --lexicon-out " + q(dir / "lex.tsv") + " --alt-paradigms-out " +
                            q(dir / "alt.txt");
    REQUIRE(cli(dir, gen).code == 0);
    REQUIRE(cli(dir, "build-index --corpus " + q(dir / "corpus") + " --out " + q(dir / "i.soix")).code == 0);
    REQUIRE(cli(dir, "build-lsa --corpus " + q(dir / "corpus") + " --k 20 --out " + q(dir / "s.sols")).code == 0);

    const auto so = cli(dir, "so --index " + q(dir / "i.soix") + " --words " + q(dir / "lex.tsv"));
    CHECK(so.code == 0);
    CHECK(so.out.rfind("word\tso\tlabel\n", 0) == 0);
    CHECK(count_lines(so.out) == 61);

    testutil::write_file(dir / "so.tsv", so.out);
    const auto text = cli(dir, "score --so-table " + q(dir / "so.tsv") + " --text 'the quick brown fox' ");
    CHECK(text.code == 3);  // no known words
    const auto first_word = so.out.substr(14, so.out.find('\t', 14) - 14);
    const auto scored = cli(dir, "score --so-table " + q(dir / "so.tsv") + " --text '" + first_word + " zzz'");
    CHECK(scored.code == 0);
    CHECK(scored.out.find("\"dominant\"") != std::string::npos);

    const auto ev = cli(dir, "eval --index " + q(dir / "i.soix") + " --lexicon " + q(dir / "lex.tsv"));
    CHECK(ev.code == 0);
    CHECK(ev.out.rfind("parameter,value,threshold_percent,classified_count,accuracy\n", 0) == 0);
    CHECK(count_lines(ev.out) == 5);

    const auto lsa = cli(dir, "eval --measure lsa --space " + q(dir / "s.sols") + " --lexicon " + q(dir / "lex.tsv") +
                                  " --step 10");
    CHECK(lsa.code == 0);
    CHECK(count_lines(lsa.out) == 11);

    const auto sw = cli(dir, "sweep --index " + q(dir / "i.soix") + " --lexicon " + q(dir / "lex.tsv") +
                                 " --param window --values 5,10");
    CHECK(sw.code == 0);
    CHECK(count_lines(sw.out) == 9);
    CHECK(sw.out.find("\nwindow,5,25,") != std::string::npos);

    const auto alt = cli(dir, "eval --index " + q(dir / "i.soix") + " --lexicon " + q(dir / "lex.tsv") +
                                  " --swap-paradigms " + q(dir / "alt.txt"));
    CHECK(alt.code == 0);

    const auto threaded =
        cli(dir, "--threads 4 eval --index " + q(dir / "i.soix") + " --lexicon " + q(dir / "lex.tsv"));
    CHECK(threaded.out == ev.out);

    const auto matched =
        cli(dir, "paradigms --match --index " + q(dir / "i.soix") + " --lexicon " + q(dir / "lex.tsv"));
    CHECK(matched.code == 0);
    CHECK(count_lines(matched.out) == 16);
}
