#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "toklite/residue.hpp"

using namespace toklite;
using testutil::make_standard;

namespace {

// Corpus over a hand-built vocabulary shaped like the interesting cases: a
// residue-style token (low ratio, fixed left context), a root-style token
// (low ratio, varied contexts), and plain frequent tokens.
struct Scenario {
    TokenizerModel model;
    CorpusStats stats;
};

Scenario build_scenario() {
    std::vector<std::string> vocab = {" ", "a", "b", "c", "d", "e",
                                      "ab", "abc", "abd", "abe", "ce"};
    std::vector<std::pair<std::string, std::string>> merges = {
        {"a", "b"}, {"ab", "c"}, {"ab", "d"}, {"ab", "e"}, {"c", "e"}};
    auto model = make_standard(vocab, merges, PretokenizerMode::whitespace_prefix);

    std::vector<std::string> corpus;
    // "ab" almost always consumed into abc/abd/abe; when final it is always
    // followed by the same neighbor -> residue shape
    for (int i = 0; i < 30; ++i) corpus.push_back("abc abd abe");
    corpus.push_back("ab ce");
    corpus.push_back("ab ce");
    // "c" survives in varied contexts via "ce" words... c is base though;
    // ce is frequent as a final token
    for (int i = 0; i < 10; ++i) corpus.push_back("ce d e");

    StatsOptions options;
    options.f2_mode = F2Mode::tree;
    return Scenario{model, accumulate(model, corpus, options)};
}

}  // namespace

TEST_CASE("fi_ratio closed forms") {
    auto model = make_standard({"a", "b", "ab", "abab"}, {{"a", "b"}, {"ab", "ab"}});
    StatsOptions options;
    options.f2_mode = F2Mode::trace;

    SUBCASE("never consumed gives 1") {
        CorpusStats stats = accumulate(model, std::vector<std::string>{"abab"}, options);
        CHECK(*fi_ratio(stats, *model.find("abab")) == 1.0);
    }
    SUBCASE("always consumed gives 0") {
        CorpusStats stats = accumulate(model, std::vector<std::string>{"abab"}, options);
        CHECK(*fi_ratio(stats, *model.find("ab")) == 0.0);
    }
    SUBCASE("unobserved is undefined") {
        CorpusStats stats = accumulate(model, std::vector<std::string>{}, options);
        CHECK_FALSE(fi_ratio(stats, *model.find("ab")).has_value());
    }
    SUBCASE("f1=1 f2=3 sits exactly on the 0.25 boundary") {
        // three docs consume ab into abc, one leaves it final
        auto m = make_standard({"a", "b", "c", "ab", "abc"}, {{"a", "b"}, {"ab", "c"}});
        CorpusStats stats =
            accumulate(m, std::vector<std::string>{"abc", "abc", "abc", "ab"}, options);
        CHECK(stats.f1[*m.find("ab")] == 1);
        CHECK(stats.f2[*m.find("ab")] == 3);
        CHECK(*fi_ratio(stats, *m.find("ab")) == 0.25);
    }
}

TEST_CASE("classify separates residues from kept low-ratio tokens") {
    Scenario sc = build_scenario();
    TokenId ab = *sc.model.find("ab");

    ResidueReport report = classify(sc.stats, sc.model, Thresholds{0.25, 0.3});
    const TokenRecord& rec = report.tokens[ab];
    CHECK(rec.category == TokenCategory::residue);
    CHECK(std::find(report.imr.begin(), report.imr.end(), ab) != report.imr.end());

    // base bytes are excluded no matter what they count
    CHECK(report.tokens[*sc.model.find("a")].category == TokenCategory::excluded);
    CHECK(report.tokens[*sc.model.find(" ")].category == TokenCategory::excluded);

    // high-ratio tokens are frequent
    CHECK(report.tokens[*sc.model.find("ce")].category == TokenCategory::frequent);

    SUBCASE("a permissive entropy threshold keeps the varied-context token") {
        // with the entropy bar below its score, ab is kept instead
        ResidueReport strict = classify(sc.stats, sc.model, Thresholds{0.25, -0.1});
        // score(ab) = 0 exactly (single left neighbor when final), so even
        // s = -0.1 < 0 keeps it
        CHECK(strict.tokens[ab].category == TokenCategory::kept_low_ratio);
        CHECK(strict.imr.empty());
    }
}

TEST_CASE("classify flags unobserved tokens without removing them") {
    auto model = make_standard({"a", "b", "ab", "abab"}, {{"a", "b"}, {"ab", "ab"}});
    CorpusStats stats = accumulate(model, std::vector<std::string>{"ab"});
    ResidueReport report = classify(stats, model, Thresholds{1.0, 10.0});
    CHECK(report.tokens[*model.find("abab")].category == TokenCategory::unobserved);
    // even with maximal thresholds the unobserved token stays out of imr
    for (TokenId t : report.imr) {
        CHECK(report.tokens[t].category == TokenCategory::residue);
        CHECK(t != *model.find("abab"));
    }
    CHECK(std::find(report.imr.begin(), report.imr.end(), *model.find("ab")) !=
          report.imr.end());  // r=1.0 admits every observed eligible token
}

TEST_CASE("classify rejects stats from another model") {
    auto m1 = make_standard({"a", "b", "ab"}, {{"a", "b"}});
    auto m2 = make_standard({"a", "b"}, {});
    CorpusStats stats = accumulate(m2, std::vector<std::string>{"ab"});
    CHECK_THROWS_AS(classify(stats, m1, Thresholds{0.25, 4.0}), IntegrityError);
}

TEST_CASE("imr never contains base, special or non-ASCII tokens") {
    std::vector<std::string> vocab = {" ",   "a",          "b",
                                      "\xC3", "\xA9",       "\xC3\xA9",
                                      "ab",   "ab\xC3\xA9", "<s>"};
    std::vector<std::pair<std::string, std::string>> merges = {
        {"a", "b"}, {"\xC3", "\xA9"}, {"ab", "\xC3\xA9"}};
    auto model = make_standard(vocab, merges, PretokenizerMode::whitespace_prefix, {"<s>"});
    std::vector<std::string> corpus = {"ab\xC3\xA9 ab\xC3\xA9", "ab"};
    CorpusStats stats = accumulate(model, corpus);

    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        double r = (rng() % 1000) / 999.0;
        double s = (rng() % 1000) / 100.0;
        ResidueReport report = classify(stats, model, Thresholds{r, s});
        for (TokenId t : report.imr) {
            CHECK_FALSE(model.is_base(t));
            CHECK_FALSE(model.is_special(t));
            CHECK(report.tokens[t].ascii_only);
        }
        // the non-ASCII token is excluded even with maximal thresholds
        CHECK(report.tokens[*model.find("ab\xC3\xA9")].category == TokenCategory::excluded);
    }
}

TEST_CASE("imr is monotone in both thresholds") {
    Scenario sc = build_scenario();
    std::vector<double> ratios = {0.0, 0.1, 0.25, 0.5, 1.0};
    std::vector<double> entropies = {0.0, 0.3, 1.0, 4.0};
    std::vector<std::vector<TokenId>> sets;
    for (double r : ratios) {
        for (double s : entropies) {
            sets.push_back(classify(sc.stats, sc.model, Thresholds{r, s}).imr);
        }
    }
    std::size_t cols = entropies.size();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const auto& cur = sets[i * cols + j];
            if (j + 1 < cols) {
                const auto& bigger = sets[i * cols + j + 1];
                CHECK(std::includes(bigger.begin(), bigger.end(), cur.begin(), cur.end()));
            }
            if (i + 1 < ratios.size()) {
                const auto& bigger = sets[(i + 1) * cols + j];
                CHECK(std::includes(bigger.begin(), bigger.end(), cur.begin(), cur.end()));
            }
        }
    }
}

TEST_CASE("sweep rows match classify and stay monotone") {
    Scenario sc = build_scenario();
    std::vector<double> ratios = {0.0, 0.25, 1.0};
    std::vector<double> entropies = {0.0, 0.3, 4.0};
    std::vector<SweepRow> rows = sweep(sc.stats, sc.model, ratios, entropies);
    REQUIRE(rows.size() == 9);
    for (const SweepRow& row : rows) {
        ResidueReport report =
            classify(sc.stats, sc.model, Thresholds{row.ratio, row.entropy});
        CHECK(row.imr_count == report.imr.size());
        CHECK(row.ascii_vocab_pct ==
              doctest::Approx(100.0 * double(report.imr.size()) /
                              double(report.ascii_vocab)));
    }
    CHECK_THROWS_AS(sweep(sc.stats, sc.model, {}, entropies), IntegrityError);
}

TEST_CASE("report jsonl carries one line per token") {
    Scenario sc = build_scenario();
    ResidueReport report = classify(sc.stats, sc.model, Thresholds{0.25, 0.3});
    std::ostringstream out;
    write_report_jsonl(out, report, sc.model);
    std::size_t lines = 0;
    std::istringstream in(out.str());
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == sc.model.size());
    CHECK(out.str().find("\"residue\"") != std::string::npos);

    std::string summary = format_summary(report, sc.model);
    CHECK(summary.find("scrap") != std::string::npos);
}
