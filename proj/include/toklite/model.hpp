#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "toklite/types.hpp"

namespace toklite {

// Immutable BPE model. Construction validates structural invariants and
// throws IntegrityError on violation; afterwards the model is safe to share
// across threads.
class TokenizerModel {
public:
    struct Init {
        std::vector<std::string> vocab;       // index = TokenId
        std::vector<MergeRule> merges;        // standard flavor only
        std::vector<std::uint32_t> ranks;     // rank_greedy flavor, parallel to vocab
        std::vector<TokenId> specials;
        Flavor flavor = Flavor::standard;
        PretokenizerConfig pretokenizer;
    };

    explicit TokenizerModel(Init init);

    std::size_t size() const { return vocab_.size(); }
    const std::string& bytes(TokenId id) const;
    std::optional<TokenId> find(std::string_view bytes) const;

    bool is_base(TokenId id) const { return base_mask_[id]; }
    bool is_special(TokenId id) const { return special_mask_[id]; }
    Flavor flavor() const { return flavor_; }
    const PretokenizerConfig& pretokenizer() const { return pretokenizer_; }

    const std::vector<MergeRule>& merges() const { return merges_; }
    const std::vector<TokenId>& base_ids() const { return base_ids_; }
    const std::vector<TokenId>& specials() const { return specials_; }

    // rank_greedy: the stored rank; standard: the rank of the creating rule
    // (base tokens have no rank).
    std::optional<std::uint32_t> rank(TokenId id) const;

    // standard flavor: the rule merging (left, right), if any
    const MergeRule* rule_for_pair(TokenId left, TokenId right) const;
    // standard flavor: the unique rule producing `result`, nullptr for base
    const MergeRule* rule_for_result(TokenId result) const;

    const std::string& content_hash() const { return content_hash_; }

private:
    void validate_standard();
    void validate_rank_greedy();
    void compute_hash();

    std::vector<std::string> vocab_;
    std::vector<MergeRule> merges_;
    std::vector<std::uint32_t> ranks_;
    std::vector<TokenId> base_ids_;
    std::vector<TokenId> specials_;
    std::vector<bool> base_mask_;
    std::vector<bool> special_mask_;
    Flavor flavor_;
    PretokenizerConfig pretokenizer_;

    struct StringViewHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const {
            return std::hash<std::string_view>{}(s);
        }
    };
    std::unordered_map<std::string, TokenId, StringViewHash, std::equal_to<>> token_to_id_;
    std::unordered_map<std::uint64_t, std::uint32_t> pair_to_rule_;  // (l<<32|r) -> merge index
    std::vector<std::int32_t> result_to_rule_;                       // -1 for base tokens
    std::string content_hash_;
};

}  // namespace toklite
