#include <doctest.h>

#include <random>

#include "toklite/pretokenizer.hpp"

using namespace toklite;

namespace {

std::vector<std::string> pieces(std::string_view text, PretokenizerMode mode) {
    PretokenizerConfig config{mode};
    std::vector<std::string> out;
    for (ByteSpan s : pretokenize(text, config)) {
        out.emplace_back(text.substr(s.first, s.second - s.first));
    }
    return out;
}

}  // namespace

TEST_CASE("whitespace_prefix attaches one leading space per word") {
    using V = std::vector<std::string>;
    CHECK(pieces("aaab aaab", PretokenizerMode::whitespace_prefix) == V{"aaab", " aaab"});
    CHECK(pieces("a  b", PretokenizerMode::whitespace_prefix) == V{"a", " ", " b"});
    CHECK(pieces(" a", PretokenizerMode::whitespace_prefix) == V{" a"});
    CHECK(pieces("a ", PretokenizerMode::whitespace_prefix) == V{"a", " "});
    CHECK(pieces("\t a", PretokenizerMode::whitespace_prefix) == V{"\t", " a"});
    CHECK(pieces("\ta", PretokenizerMode::whitespace_prefix) == V{"\t", "a"});
    CHECK(pieces("", PretokenizerMode::whitespace_prefix).empty());
}

TEST_CASE("byte_level_regex matches the GPT-2 split shape") {
    using V = std::vector<std::string>;
    auto mode = PretokenizerMode::byte_level_regex;
    CHECK(pieces("hello world", mode) == V{"hello", " world"});
    CHECK(pieces("it's", mode) == V{"it", "'s"});
    CHECK(pieces("abc123", mode) == V{"abc", "123"});
    CHECK(pieces("a  b", mode) == V{"a", " ", " b"});
    CHECK(pieces("x!!", mode) == V{"x", "!!"});
    CHECK(pieces(" !!", mode) == V{" !!"});
    CHECK(pieces("a\n", mode) == V{"a", "\n"});
    CHECK(pieces("tail   ", mode) == V{"tail", "   "});
    CHECK(pieces("don't stop", mode) == V{"don", "'t", " stop"});
}

TEST_CASE("pretokenization partitions arbitrary byte strings") {
    std::mt19937_64 rng(7);
    for (PretokenizerMode mode : {PretokenizerMode::whitespace_prefix,
                                  PretokenizerMode::byte_level_regex, PretokenizerMode::none}) {
        PretokenizerConfig config{mode};
        for (int iter = 0; iter < 300; ++iter) {
            std::string text;
            std::size_t len = rng() % 120;
            for (std::size_t i = 0; i < len; ++i) {
                // bias toward text-like content but keep raw bytes in play
                std::uint64_t roll = rng() % 10;
                if (roll < 6) {
                    text.push_back(static_cast<char>('a' + rng() % 26));
                } else if (roll < 8) {
                    text.push_back(' ');
                } else {
                    text.push_back(static_cast<char>(rng() & 0xFF));
                }
            }
            std::string glued;
            std::size_t expected_start = 0;
            for (ByteSpan s : pretokenize(text, config)) {
                CHECK(s.first == expected_start);  // exact partition, in order
                CHECK(s.second > s.first);
                expected_start = s.second;
                glued += text.substr(s.first, s.second - s.first);
            }
            CHECK(expected_start == text.size());
            CHECK(glued == text);
        }
    }
}
