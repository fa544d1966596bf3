#include "toklite/pretokenizer.hpp"

#include <array>
#include <cctype>

#include "toklite/bytes.hpp"

namespace toklite {

namespace {

bool is_ws_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<ByteSpan> split_whitespace_prefix(std::string_view text) {
    std::vector<ByteSpan> spans;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (!is_ws_byte(text[i])) {
            std::size_t j = i;
            while (j < n && !is_ws_byte(text[j])) ++j;
            spans.emplace_back(i, j);
            i = j;
            continue;
        }
        std::size_t j = i;
        while (j < n && is_ws_byte(text[j])) ++j;
        // the last space of a run attaches to a following word
        if (j < n && text[j - 1] == ' ') {
            if (j - 1 > i) spans.emplace_back(i, j - 1);
            std::size_t k = j;
            while (k < n && !is_ws_byte(text[k])) ++k;
            spans.emplace_back(j - 1, k);
            i = k;
        } else {
            spans.emplace_back(i, j);
            i = j;
        }
    }
    return spans;
}

enum class CharClass { letter, digit, space, other };

bool is_unicode_space(std::uint32_t cp) {
    switch (cp) {
        case 0x85:
        case 0xA0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
            return true;
        default:
            return (cp >= 0x2000 && cp <= 0x200A);
    }
}

// Approximation of \p{L} / \p{N}: exact for ASCII; non-ASCII codepoints
// count as letters unless they fall in space or punctuation/symbol blocks.
CharClass classify(std::uint32_t cp) {
    if (cp < 0x80) {
        unsigned char c = static_cast<unsigned char>(cp);
        if (is_ws_byte(c)) return CharClass::space;
        if (std::isalpha(c)) return CharClass::letter;
        if (std::isdigit(c)) return CharClass::digit;
        return CharClass::other;
    }
    if (is_unicode_space(cp)) return CharClass::space;
    if (cp >= 0xA1 && cp <= 0xBF) return CharClass::other;    // latin-1 punct/symbols
    if (cp == 0xD7 || cp == 0xF7) return CharClass::other;
    if (cp >= 0x2000 && cp <= 0x206F) return CharClass::other;  // general punctuation
    if (cp >= 0x20A0 && cp <= 0x20CF) return CharClass::other;  // currency
    if (cp >= 0x2190 && cp <= 0x2BFF) return CharClass::other;  // arrows/symbols
    if (cp >= 0x2E00 && cp <= 0x2E7F) return CharClass::other;
    if (cp >= 0x3000 && cp <= 0x303F) return CharClass::other;  // CJK punctuation
    if (cp >= 0xFE30 && cp <= 0xFE4F) return CharClass::other;
    if (cp >= 0xFF01 && cp <= 0xFF0F) return CharClass::other;
    return CharClass::letter;
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }

    // (class, byte length) of the char at pos; invalid UTF-8 is a 1-byte
    // "other" so arbitrary byte input still partitions cleanly.
    std::pair<CharClass, std::size_t> peek(std::size_t at) const {
        auto dec = utf8_next(text, at);
        if (!dec) return {CharClass::other, 1};
        return {classify(dec->cp), dec->len};
    }
};

std::vector<ByteSpan> split_gpt2(std::string_view text) {
    std::vector<ByteSpan> spans;
    Cursor cur{text};
    const std::size_t n = text.size();

    static constexpr std::array<std::string_view, 7> kContractions = {
        "'s", "'t", "'re", "'ve", "'m", "'ll", "'d"};

    while (!cur.done()) {
        std::size_t start = cur.pos;

        if (text[cur.pos] == '\'') {
            std::size_t matched = 0;
            for (auto suffix : kContractions) {
                if (text.substr(cur.pos, suffix.size()) == suffix && suffix.size() > matched) {
                    matched = suffix.size();
                }
            }
            if (matched > 0) {
                cur.pos += matched;
                spans.emplace_back(start, cur.pos);
                continue;
            }
        }

        auto [cls, len] = cur.peek(cur.pos);

        //  ?\p{L}+ |  ?\p{N}+ |  ?[^\s\p{L}\p{N}]+
        if (cls != CharClass::space || (text[cur.pos] == ' ' && cur.pos + 1 < n)) {
            std::size_t body = cur.pos;
            if (text[cur.pos] == ' ') {
                auto [next_cls, next_len] = cur.peek(cur.pos + 1);
                if (next_cls != CharClass::space) {
                    body = cur.pos + 1;
                    cls = next_cls;
                    len = next_len;
                }
            }
            if (body != cur.pos || cls != CharClass::space) {
                std::size_t j = body;
                while (j < n) {
                    auto [c, l] = cur.peek(j);
                    if (c != cls) break;
                    j += l;
                }
                cur.pos = j;
                spans.emplace_back(start, cur.pos);
                continue;
            }
        }

        // \s+(?!\S) | \s+
        std::size_t j = cur.pos;
        while (j < n) {
            auto [c, l] = cur.peek(j);
            if (c != CharClass::space) break;
            j += l;
        }
        if (j < n && j > cur.pos) {
            // keep the final whitespace char for the next token when possible
            std::size_t last = cur.pos;
            std::size_t k = cur.pos;
            while (k < j) {
                last = k;
                k += cur.peek(k).second;
            }
            if (last > cur.pos) j = last;
        }
        cur.pos = j;
        spans.emplace_back(start, cur.pos);
    }
    return spans;
}

}  // namespace

std::vector<ByteSpan> pretokenize(std::string_view text, const PretokenizerConfig& config) {
    if (text.empty()) return {};
    switch (config.mode) {
        case PretokenizerMode::none:
            return {ByteSpan{0, text.size()}};
        case PretokenizerMode::whitespace_prefix:
            return split_whitespace_prefix(text);
        case PretokenizerMode::byte_level_regex:
            return split_gpt2(text);
    }
    return {};
}

}  // namespace toklite
