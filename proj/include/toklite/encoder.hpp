#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toklite/model.hpp"

namespace toklite {

// One unit that existed at some point during encoding: either an atom
// (single base token or special; rule == -1) or the product of a merge.
// A formation survives when its token reached final_ids unconsumed.
struct Formation {
    TokenId token;
    std::int32_t rule;   // standard: merge rank; rank_greedy: result rank; -1 for atoms
    std::int32_t left;   // formation index of the merged left child, -1 for atoms
    std::int32_t right;
    bool survived;
};

struct EncodeTrace {
    std::vector<TokenId> final_ids;
    std::vector<std::int32_t> final_forms;  // formation index per final id
    std::vector<Formation> formations;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pretoken_spans;  // [begin,end) over final_ids

    std::size_t merge_count() const {
        std::size_t k = 0;
        for (const auto& f : formations) {
            if (f.rule >= 0 || f.left >= 0) ++k;
        }
        return k;
    }
};

// Tokenizes `text`. Special tokens are matched before pretokenization and
// pass through as single-token pretokens. Throws IntegrityError when a byte
// has no base token (the model does not cover the input alphabet).
EncodeTrace encode(const TokenizerModel& model, std::string_view text);

std::string decode(const TokenizerModel& model, std::span<const TokenId> ids);

// Merge resolution over an existing token sequence, using only rules whose
// result is not masked out in `removed` (by token id; may be nullptr).
// Used by re-merge; encode() is the same loop seeded with atoms.
std::vector<TokenId> resolve_merges(const TokenizerModel& model, std::span<const TokenId> seq,
                                    const std::vector<bool>* removed = nullptr);

}  // namespace toklite
