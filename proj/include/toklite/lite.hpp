#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toklite/encoder.hpp"
#include "toklite/model.hpp"

namespace toklite {

enum class LiteMode { split_only, split_remerge, incremental };

const char* to_string(LiteMode m);

struct LiteEncoding {
    std::vector<TokenId> ids;
    LiteMode mode;
};

// Pruned tokenizer: the base model plus a removed-token set. Encoding first
// runs the base tokenizer, splits every removed token back into its
// recorded parents until only kept tokens remain, and optionally re-merges
// each affected pretoken using the surviving merges. Removed ids never
// appear in any output.
class LiteTokenizer {
public:
    // Throws IntegrityError when imr contains a base or special token.
    LiteTokenizer(TokenizerModel base, std::vector<TokenId> imr);

    const TokenizerModel& base() const { return base_; }
    const std::vector<TokenId>& removed_ids() const { return removed_ids_; }  // sorted
    const std::vector<bool>& removed_mask() const { return removed_; }
    bool is_removed(TokenId t) const { return removed_[t]; }

    // Replaces every removed final id with its traced parent pair,
    // recursively. Byte content is preserved; the result contains no
    // removed id.
    std::vector<TokenId> split(const EncodeTrace& trace) const;

    // Reruns merge resolution with surviving merges inside each pretoken
    // span. Spans without a split are untouched (resolution there is a
    // fixed point already); `dirty` marks the spans to revisit and may be
    // null to revisit all.
    std::vector<TokenId> remerge(std::span<const TokenId> ids,
                                 std::span<const std::pair<std::uint32_t, std::uint32_t>> spans,
                                 const std::vector<bool>* dirty = nullptr) const;

    LiteEncoding encode(std::string_view text, LiteMode mode) const;

    // Dense little-endian bitmask over the vocabulary: bit i%8 of byte i/8
    // is set when token i is removed.
    std::string bitmask() const;

    void save(std::ostream& out, const std::string& run_config_json = "") const;
    static LiteTokenizer load(std::istream& in);
    static LiteTokenizer load_file(const std::string& path);

private:
    struct SplitOut {
        std::vector<TokenId> ids;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> spans;
        std::vector<bool> dirty;
    };
    SplitOut split_spans(const EncodeTrace& trace) const;

    TokenizerModel base_;
    std::vector<TokenId> removed_ids_;
    std::vector<bool> removed_;
};

// Append-only encoder with split_only semantics: ids already emitted are
// never revised as more text arrives. Complete pretokens are flushed once
// following input can no longer change them.
class IncrementalEncoder {
public:
    explicit IncrementalEncoder(const LiteTokenizer& lite) : lite_(lite) {}

    std::vector<TokenId> feed(std::string_view bytes);
    std::vector<TokenId> finish();

private:
    const LiteTokenizer& lite_;
    std::string pending_;
};

}  // namespace toklite
