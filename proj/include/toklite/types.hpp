#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace toklite {

// Dense index into a model's vocabulary.
using TokenId = std::uint32_t;

inline constexpr TokenId kNoToken = static_cast<TokenId>(-1);

// One learned merge. Lower ranks apply first.
struct MergeRule {
    std::uint32_t rank;
    TokenId left;
    TokenId right;
    TokenId result;
};

// standard: encoding replays the recorded merge list in rank order.
// rank_greedy: no merge list; encoding repeatedly merges the adjacent pair
// whose concatenation is the lowest-ranked token in the vocabulary.
enum class Flavor { standard, rank_greedy };

enum class PretokenizerMode { whitespace_prefix, byte_level_regex, none };

struct PretokenizerConfig {
    PretokenizerMode mode = PretokenizerMode::whitespace_prefix;

    bool operator==(const PretokenizerConfig&) const = default;
};

// Malformed input text: bad line, bad JSON, bad base64.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally invalid data: unknown ids, duplicate ranks, hash mismatch.
struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

const char* to_string(Flavor f);
const char* to_string(PretokenizerMode m);
Flavor flavor_from_string(const std::string& s);
PretokenizerMode pretokenizer_mode_from_string(const std::string& s);

}  // namespace toklite
