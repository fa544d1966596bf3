#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toklite/model.hpp"

namespace toklite {

enum class ByteLevelVocab { detect, yes, no };

struct LoadOptions {
    // GPT-2 style vocabs store token bytes as printable codepoints; `detect`
    // decodes when every token fits the byte alphabet and at least one uses
    // a remapped codepoint.
    ByteLevelVocab byte_level = ByteLevelVocab::detect;
    std::vector<std::string> special_tokens;
    PretokenizerConfig pretokenizer;
};

// vocab.json (token -> id) + merges.txt ("left right" per line, optional
// "#version" header). Throws ParseError / IntegrityError.
TokenizerModel load_hf(std::istream& vocab_json, std::istream& merges_txt,
                       const LoadOptions& options = {});

// tiktoken rank file: "base64(token-bytes) rank" per line. Requires all 256
// single-byte tokens. Special token strings are appended after the last rank.
TokenizerModel load_tiktoken(std::istream& ranks, const LoadOptions& options = {});

// Native single-document JSON format (see docs/formats.md). Lossless.
struct NativeFile {
    TokenizerModel model;
    std::vector<TokenId> imr;  // present for pruned tokenizers, else empty
};

NativeFile load_native(std::istream& in);
NativeFile load_native_file(const std::string& path);
void save_native(std::ostream& out, const TokenizerModel& model,
                 const std::vector<TokenId>* imr = nullptr,
                 const std::string& run_config_json = "");

TokenizerModel load_model_file(const std::string& path);  // native only

}  // namespace toklite
