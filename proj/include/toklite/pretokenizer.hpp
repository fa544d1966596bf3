#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "toklite/types.hpp"

namespace toklite {

using ByteSpan = std::pair<std::size_t, std::size_t>;  // [begin, end)

// Splits `text` into pretoken byte spans. The spans always partition the
// input: concatenating them reproduces it byte for byte.
//
// whitespace_prefix: a pretoken is a maximal run of non-whitespace bytes,
// optionally prefixed by a single space; leftover whitespace runs form their
// own pretokens.
//
// byte_level_regex: hand-rolled version of the GPT-2 split pattern
//   's|'t|'re|'ve|'m|'ll|'d| ?\p{L}+| ?\p{N}+| ?[^\s\p{L}\p{N}]+|\s+(?!\S)|\s+
// over UTF-8 with an approximate classifier (ASCII letters/digits exact;
// non-ASCII codepoints are letters unless they are spaces or sit in common
// punctuation blocks). Invalid UTF-8 bytes fall into the punctuation class.
std::vector<ByteSpan> pretokenize(std::string_view text, const PretokenizerConfig& config);

}  // namespace toklite
