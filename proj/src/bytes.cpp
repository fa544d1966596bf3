#include "toklite/bytes.hpp"

#include <array>
#include <cstdio>

#include "toklite/types.hpp"

namespace toklite {

namespace {

constexpr char kBase64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

const std::array<int8_t, 256>& base64_table() {
    static const std::array<int8_t, 256> table = [] {
        std::array<int8_t, 256> t{};
        t.fill(-1);
        for (int i = 0; i < 64; ++i) {
            t[static_cast<unsigned char>(kBase64Alphabet[i])] = static_cast<int8_t>(i);
        }
        return t;
    }();
    return table;
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 3 <= bytes.size()) {
        std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                          (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                          static_cast<unsigned char>(bytes[i + 2]);
        out.push_back(kBase64Alphabet[(v >> 18) & 63]);
        out.push_back(kBase64Alphabet[(v >> 12) & 63]);
        out.push_back(kBase64Alphabet[(v >> 6) & 63]);
        out.push_back(kBase64Alphabet[v & 63]);
        i += 3;
    }
    std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        std::uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
        out.push_back(kBase64Alphabet[(v >> 18) & 63]);
        out.push_back(kBase64Alphabet[(v >> 12) & 63]);
        out.push_back('=');
        out.push_back('=');
    } else if (rest == 2) {
        std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                          (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out.push_back(kBase64Alphabet[(v >> 18) & 63]);
        out.push_back(kBase64Alphabet[(v >> 12) & 63]);
        out.push_back(kBase64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::string base64_decode(std::string_view text) {
    std::string out;
    out.reserve(text.size() / 4 * 3);
    std::uint32_t buffer = 0;
    int bits = 0;
    std::size_t pad = 0;
    for (char c : text) {
        if (c == '=') {
            ++pad;
            continue;
        }
        if (pad > 0) {
            throw ParseError("base64: data after padding");
        }
        int8_t v = base64_table()[static_cast<unsigned char>(c)];
        if (v < 0) {
            throw ParseError("base64: invalid character");
        }
        buffer = (buffer << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((buffer >> bits) & 0xFF));
        }
    }
    if (pad > 2) {
        throw ParseError("base64: bad padding");
    }
    return out;
}

Fnv1a64& Fnv1a64::update(std::string_view bytes) {
    for (unsigned char c : bytes) {
        state_ ^= c;
        state_ *= 0x100000001b3ull;
    }
    return *this;
}

Fnv1a64& Fnv1a64::update_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        state_ ^= (v >> (8 * i)) & 0xFF;
        state_ *= 0x100000001b3ull;
    }
    return *this;
}

std::string Fnv1a64::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
    return std::string(buf, 16);
}

bool is_ascii(std::string_view bytes) {
    for (unsigned char c : bytes) {
        if (c > 0x7F) return false;
    }
    return true;
}

std::string display_token(std::string_view bytes) {
    std::string out;
    std::size_t i = 0;
    while (i < bytes.size() && bytes[i] == ' ') {
        out += "␣";  // ␣
        ++i;
    }
    for (; i < bytes.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(bytes[i]);
        if (c >= 0x20 && c < 0x7F) {
            out.push_back(static_cast<char>(c));
        } else if (c >= 0x80) {
            // keep multibyte UTF-8 intact when valid; escape otherwise
            auto dec = utf8_next(bytes, i);
            if (dec && dec->len > 1) {
                out.append(bytes.substr(i, dec->len));
                i += dec->len - 1;
            } else {
                char buf[5];
                std::snprintf(buf, sizeof(buf), "\\x%02X", c);
                out += buf;
            }
        } else {
            char buf[5];
            std::snprintf(buf, sizeof(buf), "\\x%02X", c);
            out += buf;
        }
    }
    return out;
}

std::optional<Utf8Decode> utf8_next(std::string_view s, std::size_t pos) {
    if (pos >= s.size()) return std::nullopt;
    unsigned char c0 = static_cast<unsigned char>(s[pos]);
    if (c0 < 0x80) return Utf8Decode{c0, 1};
    std::size_t len;
    std::uint32_t cp;
    if ((c0 & 0xE0) == 0xC0) {
        len = 2;
        cp = c0 & 0x1F;
    } else if ((c0 & 0xF0) == 0xE0) {
        len = 3;
        cp = c0 & 0x0F;
    } else if ((c0 & 0xF8) == 0xF0) {
        len = 4;
        cp = c0 & 0x07;
    } else {
        return std::nullopt;
    }
    if (pos + len > s.size()) return std::nullopt;
    for (std::size_t i = 1; i < len; ++i) {
        unsigned char c = static_cast<unsigned char>(s[pos + i]);
        if ((c & 0xC0) != 0x80) return std::nullopt;
        cp = (cp << 6) | (c & 0x3F);
    }
    // reject overlong encodings and surrogates
    if (len == 2 && cp < 0x80) return std::nullopt;
    if (len == 3 && cp < 0x800) return std::nullopt;
    if (len == 4 && cp < 0x10000) return std::nullopt;
    if (cp >= 0xD800 && cp <= 0xDFFF) return std::nullopt;
    if (cp > 0x10FFFF) return std::nullopt;
    return Utf8Decode{cp, len};
}

std::string utf8_encode(std::uint32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

namespace {

// Printable ranges map to themselves; everything else gets a codepoint
// starting at 0x100, in byte order. Matches the GPT-2 vocab convention.
struct ByteUnicodeMaps {
    std::array<std::uint32_t, 256> byte_to_cp{};
    // cp -> byte + 1 (0 = unmapped); only codepoints < 0x180 occur
    std::array<std::uint16_t, 0x180> cp_to_byte{};

    ByteUnicodeMaps() {
        cp_to_byte.fill(0);
        auto printable = [](int b) {
            return (b >= 0x21 && b <= 0x7E) || (b >= 0xA1 && b <= 0xAC) ||
                   (b >= 0xAE && b <= 0xFF);
        };
        std::uint32_t next = 0x100;
        for (int b = 0; b < 256; ++b) {
            std::uint32_t cp = printable(b) ? static_cast<std::uint32_t>(b) : next++;
            byte_to_cp[b] = cp;
            cp_to_byte[cp] = static_cast<std::uint16_t>(b + 1);
        }
    }
};

const ByteUnicodeMaps& byte_unicode_maps() {
    static const ByteUnicodeMaps maps;
    return maps;
}

}  // namespace

std::string gpt2_bytes_to_printable(std::string_view raw) {
    const auto& maps = byte_unicode_maps();
    std::string out;
    out.reserve(raw.size() * 2);
    for (unsigned char c : raw) {
        out += utf8_encode(maps.byte_to_cp[c]);
    }
    return out;
}

std::optional<std::string> gpt2_printable_to_bytes(std::string_view printable) {
    const auto& maps = byte_unicode_maps();
    std::string out;
    out.reserve(printable.size());
    std::size_t i = 0;
    while (i < printable.size()) {
        auto dec = utf8_next(printable, i);
        if (!dec || dec->cp >= maps.cp_to_byte.size()) return std::nullopt;
        std::uint16_t b = maps.cp_to_byte[dec->cp];
        if (b == 0) return std::nullopt;
        out.push_back(static_cast<char>(b - 1));
        i += dec->len;
    }
    return out;
}

const char* to_string(Flavor f) {
    return f == Flavor::standard ? "standard" : "rank_greedy";
}

const char* to_string(PretokenizerMode m) {
    switch (m) {
        case PretokenizerMode::whitespace_prefix: return "whitespace_prefix";
        case PretokenizerMode::byte_level_regex: return "byte_level_regex";
        case PretokenizerMode::none: return "none";
    }
    return "?";
}

Flavor flavor_from_string(const std::string& s) {
    if (s == "standard") return Flavor::standard;
    if (s == "rank_greedy") return Flavor::rank_greedy;
    throw ParseError("unknown flavor: " + s);
}

PretokenizerMode pretokenizer_mode_from_string(const std::string& s) {
    if (s == "whitespace_prefix") return PretokenizerMode::whitespace_prefix;
    if (s == "byte_level_regex") return PretokenizerMode::byte_level_regex;
    if (s == "none") return PretokenizerMode::none;
    throw ParseError("unknown pretokenizer mode: " + s);
}

}  // namespace toklite
