#include "toklite/model.hpp"

#include <algorithm>

#include "toklite/bytes.hpp"

namespace toklite {

namespace {

std::uint64_t pair_key(TokenId l, TokenId r) {
    return (static_cast<std::uint64_t>(l) << 32) | r;
}

}  // namespace

TokenizerModel::TokenizerModel(Init init)
    : vocab_(std::move(init.vocab)),
      merges_(std::move(init.merges)),
      ranks_(std::move(init.ranks)),
      specials_(std::move(init.specials)),
      flavor_(init.flavor),
      pretokenizer_(init.pretokenizer) {
    const std::size_t n = vocab_.size();
    if (n == 0) {
        throw IntegrityError("model: empty vocabulary");
    }
    token_to_id_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (vocab_[i].empty()) {
            throw IntegrityError("model: empty token bytes at id " + std::to_string(i));
        }
        auto [it, inserted] = token_to_id_.emplace(vocab_[i], static_cast<TokenId>(i));
        if (!inserted) {
            throw IntegrityError("model: duplicate token bytes at ids " +
                                 std::to_string(it->second) + " and " + std::to_string(i));
        }
    }

    special_mask_.assign(n, false);
    std::sort(specials_.begin(), specials_.end());
    specials_.erase(std::unique(specials_.begin(), specials_.end()), specials_.end());
    for (TokenId s : specials_) {
        if (s >= n) throw IntegrityError("model: special id out of range");
        special_mask_[s] = true;
    }

    if (flavor_ == Flavor::standard) {
        validate_standard();
    } else {
        validate_rank_greedy();
    }

    base_ids_.clear();
    for (std::size_t i = 0; i < n; ++i) {
        if (base_mask_[i]) base_ids_.push_back(static_cast<TokenId>(i));
    }
    compute_hash();
}

void TokenizerModel::validate_standard() {
    const std::size_t n = vocab_.size();
    if (!ranks_.empty()) {
        throw IntegrityError("model: standard flavor does not carry a rank table");
    }
    std::sort(merges_.begin(), merges_.end(),
              [](const MergeRule& a, const MergeRule& b) { return a.rank < b.rank; });

    result_to_rule_.assign(n, -1);
    pair_to_rule_.reserve(merges_.size());
    // processing in rank order doubles as the acyclicity check: a rule may
    // only reference base tokens or results of earlier rules
    std::vector<bool> formed(n, false);
    std::vector<bool> is_result(n, false);
    for (const MergeRule& m : merges_) {
        if (m.left >= n || m.right >= n || m.result >= n) {
            throw IntegrityError("model: merge references id out of range");
        }
        is_result[m.result] = true;
    }
    for (std::size_t i = 0; i < n; ++i) formed[i] = !is_result[i];

    std::uint32_t prev_rank = 0;
    bool first = true;
    for (std::size_t idx = 0; idx < merges_.size(); ++idx) {
        const MergeRule& m = merges_[idx];
        if (!first && m.rank == prev_rank) {
            throw IntegrityError("model: duplicate merge rank " + std::to_string(m.rank));
        }
        prev_rank = m.rank;
        first = false;
        if (vocab_[m.result] != vocab_[m.left] + vocab_[m.right]) {
            throw IntegrityError("model: merge result bytes mismatch for id " +
                                 std::to_string(m.result));
        }
        if (!formed[m.left] || !formed[m.right]) {
            throw IntegrityError("model: merge rank " + std::to_string(m.rank) +
                                 " uses a token formed by a later rule (cycle)");
        }
        if (result_to_rule_[m.result] != -1) {
            throw IntegrityError("model: token " + std::to_string(m.result) +
                                 " produced by more than one merge");
        }
        if (special_mask_[m.result] || special_mask_[m.left] || special_mask_[m.right]) {
            throw IntegrityError("model: special token participates in a merge");
        }
        result_to_rule_[m.result] = static_cast<std::int32_t>(idx);
        auto [it, inserted] = pair_to_rule_.emplace(pair_key(m.left, m.right),
                                                    static_cast<std::uint32_t>(idx));
        if (!inserted) {
            throw IntegrityError("model: duplicate merge pair");
        }
        formed[m.result] = true;
    }

    base_mask_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) base_mask_[i] = !is_result[i] && !special_mask_[i];
}

void TokenizerModel::validate_rank_greedy() {
    const std::size_t n = vocab_.size();
    if (!merges_.empty()) {
        throw IntegrityError("model: rank_greedy flavor does not carry a merge list");
    }
    if (ranks_.size() != n) {
        throw IntegrityError("model: rank table size mismatch");
    }
    std::unordered_set<std::uint32_t> seen;
    seen.reserve(n);
    for (std::uint32_t r : ranks_) {
        if (!seen.insert(r).second) {
            throw IntegrityError("model: duplicate rank " + std::to_string(r));
        }
    }
    base_mask_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        base_mask_[i] = vocab_[i].size() == 1 && !special_mask_[i];
    }
    // every non-base token must decompose into two vocabulary tokens
    for (std::size_t i = 0; i < n; ++i) {
        if (base_mask_[i] || special_mask_[i]) continue;
        const std::string& bytes = vocab_[i];
        bool splittable = false;
        for (std::size_t cut = 1; cut < bytes.size() && !splittable; ++cut) {
            std::string_view sv{bytes};
            splittable = find(sv.substr(0, cut)).has_value() && find(sv.substr(cut)).has_value();
        }
        if (!splittable) {
            throw IntegrityError("model: token " + std::to_string(i) +
                                 " has no decomposition into vocabulary tokens");
        }
    }
}

void TokenizerModel::compute_hash() {
    Fnv1a64 h;
    h.update("toklite.model.v1");
    h.update_u64(static_cast<std::uint64_t>(flavor_));
    h.update_u64(static_cast<std::uint64_t>(pretokenizer_.mode));
    h.update_u64(vocab_.size());
    for (const auto& t : vocab_) {
        h.update_u64(t.size());
        h.update(t);
    }
    h.update_u64(merges_.size());
    for (const auto& m : merges_) {
        h.update_u64(m.rank);
        h.update_u64(pair_key(m.left, m.right));
        h.update_u64(m.result);
    }
    h.update_u64(ranks_.size());
    for (std::uint32_t r : ranks_) h.update_u64(r);
    h.update_u64(specials_.size());
    for (TokenId s : specials_) h.update_u64(s);
    content_hash_ = h.hex();
}

const std::string& TokenizerModel::bytes(TokenId id) const {
    if (id >= vocab_.size()) {
        throw IntegrityError("model: token id " + std::to_string(id) + " out of range");
    }
    return vocab_[id];
}

std::optional<TokenId> TokenizerModel::find(std::string_view bytes) const {
    auto it = token_to_id_.find(bytes);
    if (it == token_to_id_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> TokenizerModel::rank(TokenId id) const {
    if (id >= vocab_.size()) return std::nullopt;
    if (flavor_ == Flavor::rank_greedy) return ranks_[id];
    const MergeRule* rule = rule_for_result(id);
    if (!rule) return std::nullopt;
    return rule->rank;
}

const MergeRule* TokenizerModel::rule_for_pair(TokenId left, TokenId right) const {
    auto it = pair_to_rule_.find(pair_key(left, right));
    if (it == pair_to_rule_.end()) return nullptr;
    return &merges_[it->second];
}

const MergeRule* TokenizerModel::rule_for_result(TokenId result) const {
    if (flavor_ != Flavor::standard || result >= result_to_rule_.size()) return nullptr;
    std::int32_t idx = result_to_rule_[result];
    if (idx < 0) return nullptr;
    return &merges_[idx];
}

}  // namespace toklite
