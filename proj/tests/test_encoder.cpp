#include <doctest.h>

#include <map>
#include <random>

#include "helpers.hpp"
#include "toklite/encoder.hpp"

using namespace toklite;
using testutil::make_rank_greedy;
using testutil::make_standard;

namespace {

std::map<std::string, int> formation_counts(const TokenizerModel& model,
                                            const EncodeTrace& trace, bool survived) {
    std::map<std::string, int> out;
    for (const Formation& f : trace.formations) {
        if (f.survived == survived) out[model.bytes(f.token)] += 1;
    }
    return out;
}

std::vector<std::string> final_strings(const TokenizerModel& model, const EncodeTrace& trace) {
    std::vector<std::string> out;
    for (TokenId id : trace.final_ids) out.push_back(model.bytes(id));
    return out;
}

}  // namespace

TEST_CASE("standard replay merges lowest rank first") {
    auto model = make_standard({"a", "b", "c", "ab", "abab", "abc"},
                               {{"a", "b"}, {"ab", "ab"}, {"ab", "c"}});
    EncodeTrace trace = encode(model, "ababc");

    CHECK(final_strings(model, trace) == std::vector<std::string>{"abab", "c"});

    auto consumed = formation_counts(model, trace, false);
    CHECK(consumed["ab"] == 2);
    CHECK(consumed["a"] == 2);
    CHECK(consumed["b"] == 2);
    auto survived = formation_counts(model, trace, true);
    CHECK(survived["abab"] == 1);
    CHECK(survived["c"] == 1);
    CHECK(survived.count("ab") == 0);

    SUBCASE("trace conservation: each merge reduces the unit count by one") {
        std::size_t atoms = 0;
        for (const Formation& f : trace.formations) {
            if (f.rule < 0) ++atoms;
        }
        CHECK(atoms == 5);
        CHECK(trace.final_ids.size() == atoms - trace.merge_count());
    }
}

TEST_CASE("empty text encodes to nothing") {
    auto model = make_standard({"a"}, {});
    EncodeTrace trace = encode(model, "");
    CHECK(trace.final_ids.empty());
    CHECK(trace.pretoken_spans.empty());
    CHECK(decode(model, trace.final_ids) == "");
}

TEST_CASE("decode concatenates and validates ids") {
    auto model = make_standard({"a", "b", "c", "ab", "abab"}, {{"a", "b"}, {"ab", "ab"}});
    std::vector<TokenId> ids = {4, 2};
    CHECK(decode(model, ids) == "ababc");
    std::vector<TokenId> bad = {99};
    CHECK_THROWS_AS(decode(model, bad), IntegrityError);
}

TEST_CASE("round-trip over random strings, both flavors") {
    auto standard = make_standard({"a", "b", "c", " ", "ab", "abab", "bc"},
                                  {{"a", "b"}, {"ab", "ab"}, {"b", "c"}},
                                  PretokenizerMode::whitespace_prefix);
    auto greedy = make_rank_greedy({"a", "b", "c", " ", "ab", "bc", "abc"},
                                   PretokenizerMode::whitespace_prefix);
    std::mt19937_64 rng(11);
    const std::string alphabet = "abc ";
    for (int iter = 0; iter < 500; ++iter) {
        std::string text;
        std::size_t len = rng() % 64;
        for (std::size_t i = 0; i < len; ++i) text.push_back(alphabet[rng() % alphabet.size()]);
        for (const TokenizerModel* model : {&standard, &greedy}) {
            EncodeTrace trace = encode(*model, text);
            CHECK(decode(*model, trace.final_ids) == text);
        }
    }
}

TEST_CASE("encoding is deterministic") {
    auto model = make_standard({"a", "b", " ", "ab"}, {{"a", "b"}},
                               PretokenizerMode::whitespace_prefix);
    EncodeTrace t1 = encode(model, "ab ab b a");
    EncodeTrace t2 = encode(model, "ab ab b a");
    CHECK(t1.final_ids == t2.final_ids);
    CHECK(t1.pretoken_spans == t2.pretoken_spans);
    CHECK(t1.formations.size() == t2.formations.size());
}

TEST_CASE("rank_greedy picks the lowest-ranked in-vocabulary concatenation") {
    // "bc" outranks "ab", so greedy takes b+c first even though ab is present
    auto model = make_rank_greedy({"a", "b", "c", "bc", "ab"});
    EncodeTrace trace = encode(model, "abc");
    CHECK(final_strings(model, trace) == std::vector<std::string>{"a", "bc"});
}

TEST_CASE("rank_greedy trace records the decomposition actually used") {
    // cd then bcd form before ab ever can, so abcd is reached as a+bcd even
    // though ab+cd is also a representable decomposition
    auto model = make_rank_greedy({"a", "b", "c", "d", "cd", "bcd", "abcd", "ab"});
    EncodeTrace trace = encode(model, "abcd");
    REQUIRE(trace.final_ids.size() == 1);
    CHECK(model.bytes(trace.final_ids[0]) == "abcd");

    const Formation& top = trace.formations[trace.final_forms[0]];
    CHECK(model.bytes(trace.formations[top.left].token) == "a");
    CHECK(model.bytes(trace.formations[top.right].token) == "bcd");
}

TEST_CASE("pretoken spans partition final ids") {
    auto model = make_standard({"a", "b", " ", "ab"}, {{"a", "b"}},
                               PretokenizerMode::whitespace_prefix);
    EncodeTrace trace = encode(model, "ab ab");
    REQUIRE(trace.pretoken_spans.size() == 2);
    CHECK(trace.pretoken_spans[0] == std::pair<std::uint32_t, std::uint32_t>{0, 1});
    CHECK(trace.pretoken_spans[1].second == trace.final_ids.size());
    // " ab" has no " a" token: encodes as [" ", "ab"]
    CHECK(final_strings(model, trace) == std::vector<std::string>{"ab", " ", "ab"});
}

TEST_CASE("special tokens pass through untouched") {
    auto model = make_standard({"a", "b", "ab", "<|end|>", "<", "|", "e", "n", "d", ">"},
                               {{"a", "b"}}, PretokenizerMode::whitespace_prefix, {"<|end|>"});
    EncodeTrace trace = encode(model, "ab<|end|>ab");
    CHECK(final_strings(model, trace) ==
          std::vector<std::string>{"ab", "<|end|>", "ab"});
    // the special is its own pretoken span
    CHECK(trace.pretoken_spans.size() == 3);
    CHECK(decode(model, trace.final_ids) == "ab<|end|>ab");
}

TEST_CASE("unknown byte reports a coverage error") {
    auto model = make_standard({"a"}, {});
    CHECK_THROWS_AS(encode(model, "ax"), IntegrityError);
}

TEST_CASE("replay fidelity: vocabulary tokens re-encode to their own bytes") {
    auto model = make_standard({"a", "b", "c", "ab", "abc"}, {{"a", "b"}, {"ab", "c"}});
    for (TokenId t = 0; t < model.size(); ++t) {
        EncodeTrace trace = encode(model, model.bytes(t));
        CHECK(decode(model, trace.final_ids) == model.bytes(t));
    }
    // unique lowest-rank path: "ab" re-encodes to itself
    EncodeTrace trace = encode(model, "ab");
    REQUIRE(trace.final_ids.size() == 1);
    CHECK(model.bytes(trace.final_ids[0]) == "ab");
}
