#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toklite/model.hpp"

namespace toklite {

using ParentPair = std::pair<TokenId, TokenId>;

// Tokens reachable upward from a token through merges, with subtree
// multiplicity: multiplicity m for descendant d means the token occurs m
// times inside d's merge tree. Standard flavor only.
struct DescendantSet {
    TokenId token;
    std::vector<std::pair<TokenId, std::uint64_t>> descendants;  // sorted by id
};

// Parent/descendant structure over the vocabulary: a tree for standard
// models (unique parent pair per non-base token), a DAG for rank_greedy
// models (every split into two strictly lower-ranked tokens is a parent
// pair). Immutable after build; descendant sets are memoized on demand and
// safe under concurrent readers.
class MergeGraph {
public:
    static MergeGraph build(const TokenizerModel& model);

    Flavor flavor() const { return flavor_; }
    std::size_t size() const { return parents_.size(); }

    const std::vector<ParentPair>& parents(TokenId t) const;
    const std::vector<TokenId>& children(TokenId t) const;

    // Unique parent pair (standard) or the supplied trace decomposition
    // (rank_greedy). Throws on base tokens and invalid pairs.
    ParentPair split_once(TokenId t, std::optional<ParentPair> used_parent = std::nullopt) const;

    // standard flavor only; throws IntegrityError on rank_greedy graphs
    DescendantSet descendants(TokenId t) const;

    // distinct tokens inside t's own merge tree, t excluded (standard only)
    std::vector<TokenId> subtree_tokens(TokenId t) const;

    // ids ordered so that parents precede the tokens they form
    const std::vector<TokenId>& formation_order() const { return formation_order_; }

private:
    Flavor flavor_;
    std::vector<std::vector<ParentPair>> parents_;
    std::vector<std::vector<TokenId>> children_;
    std::vector<TokenId> formation_order_;

    struct Memo {
        std::mutex mutex;
        std::vector<std::optional<DescendantSet>> sets;
    };
    std::unique_ptr<Memo> memo_ = std::make_unique<Memo>();
};

// Figure-style renderings of the merge tree rooted at `t`: the composition
// tree below it plus `up_depth` levels of tokens formed from it.
std::string render_merge_tree_dot(const TokenizerModel& model, const MergeGraph& graph,
                                  TokenId t, int up_depth = 0);
std::string render_merge_tree_json(const TokenizerModel& model, const MergeGraph& graph,
                                   TokenId t, int up_depth = 0);

}  // namespace toklite
