#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace toklite {

std::string base64_encode(std::string_view bytes);

// Throws ParseError on characters outside the base64 alphabet or bad padding.
std::string base64_decode(std::string_view text);

// FNV-1a, 64 bit. Used for content hashes of models and derived artifacts.
class Fnv1a64 {
public:
    Fnv1a64& update(std::string_view bytes);
    Fnv1a64& update_u64(std::uint64_t v);
    std::uint64_t value() const { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

// True when every byte is 7-bit ASCII.
bool is_ascii(std::string_view bytes);

// Display form for tables and logs: leading spaces rendered as "␣",
// non-printable bytes as \xNN.
std::string display_token(std::string_view bytes);

struct Utf8Decode {
    std::uint32_t cp;
    std::size_t len;
};

// Decodes the codepoint starting at `pos`, or nullopt for an invalid or
// truncated sequence.
std::optional<Utf8Decode> utf8_next(std::string_view s, std::size_t pos);

std::string utf8_encode(std::uint32_t cp);

// GPT-2 style byte-to-printable vocabulary encoding: every byte maps to a
// printable codepoint so token byte-strings can live in JSON vocab files.
std::string gpt2_bytes_to_printable(std::string_view raw);

// Inverse mapping; nullopt when the string contains a codepoint outside the
// 256-codepoint byte alphabet (i.e. the vocab is not byte-encoded).
std::optional<std::string> gpt2_printable_to_bytes(std::string_view printable);

}  // namespace toklite
