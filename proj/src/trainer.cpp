#include "toklite/trainer.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "toklite/pretokenizer.hpp"

namespace toklite {

namespace {

struct Word {
    std::vector<TokenId> symbols;
    std::uint64_t count;
};

}  // namespace

TokenizerModel train_tiny(const std::vector<std::string>& docs, const TrainOptions& options) {
    std::unordered_map<std::string, std::uint64_t> pretoken_counts;
    bool any_bytes = false;
    for (const std::string& doc : docs) {
        for (ByteSpan span : pretokenize(doc, options.pretokenizer)) {
            pretoken_counts[doc.substr(span.first, span.second - span.first)]++;
            any_bytes = true;
        }
    }
    if (!any_bytes) {
        throw IntegrityError("train: empty corpus");
    }

    std::vector<std::string> vocab;
    std::unordered_map<std::string, TokenId> index;
    auto intern = [&](const std::string& bytes) {
        auto it = index.find(bytes);
        if (it != index.end()) return it->second;
        TokenId id = static_cast<TokenId>(vocab.size());
        vocab.push_back(bytes);
        index.emplace(bytes, id);
        return id;
    };

    if (options.full_byte_alphabet) {
        for (int b = 0; b < 256; ++b) intern(std::string(1, static_cast<char>(b)));
    } else {
        std::vector<bool> seen(256, false);
        for (const auto& [word, n] : pretoken_counts) {
            for (unsigned char c : word) seen[c] = true;
        }
        for (int b = 0; b < 256; ++b) {
            if (seen[b]) intern(std::string(1, static_cast<char>(b)));
        }
    }
    if (options.target_vocab < vocab.size()) {
        throw IntegrityError("train: target vocab " + std::to_string(options.target_vocab) +
                             " smaller than the base alphabet (" + std::to_string(vocab.size()) +
                             ")");
    }

    // deterministic word order: sort unique pretokens
    std::vector<Word> words;
    {
        std::vector<std::pair<std::string, std::uint64_t>> sorted(pretoken_counts.begin(),
                                                                  pretoken_counts.end());
        std::sort(sorted.begin(), sorted.end());
        for (auto& [text, n] : sorted) {
            Word w;
            w.count = n;
            for (char c : text) w.symbols.push_back(index.at(std::string(1, c)));
            words.push_back(std::move(w));
        }
    }

    std::vector<MergeRule> merges;
    while (vocab.size() < options.target_vocab) {
        std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
        for (const Word& w : words) {
            for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
                std::uint64_t key = (static_cast<std::uint64_t>(w.symbols[i]) << 32) |
                                    w.symbols[i + 1];
                pair_counts[key] += w.count;
            }
        }

        std::uint64_t best_count = 0;
        TokenId best_l = kNoToken, best_r = kNoToken;
        for (const auto& [key, n] : pair_counts) {
            TokenId l = static_cast<TokenId>(key >> 32);
            TokenId r = static_cast<TokenId>(key & 0xFFFFFFFF);
            // already-known byte strings cannot be added again
            if (index.count(vocab[l] + vocab[r])) continue;
            if (n > best_count) {
                best_count = n;
                best_l = l;
                best_r = r;
            } else if (n == best_count) {
                auto candidate = std::tie(vocab[l], vocab[r]);
                auto incumbent = std::tie(vocab[best_l], vocab[best_r]);
                if (candidate < incumbent) {
                    best_l = l;
                    best_r = r;
                }
            }
        }
        if (best_count == 0) break;

        TokenId result = intern(vocab[best_l] + vocab[best_r]);
        merges.push_back(MergeRule{static_cast<std::uint32_t>(merges.size()), best_l, best_r,
                                   result});

        for (Word& w : words) {
            if (w.symbols.size() < 2) continue;
            std::vector<TokenId> next;
            next.reserve(w.symbols.size());
            std::size_t i = 0;
            while (i < w.symbols.size()) {
                if (i + 1 < w.symbols.size() && w.symbols[i] == best_l &&
                    w.symbols[i + 1] == best_r) {
                    next.push_back(result);
                    i += 2;
                } else {
                    next.push_back(w.symbols[i]);
                    ++i;
                }
            }
            w.symbols = std::move(next);
        }
    }

    TokenizerModel::Init init;
    init.vocab = std::move(vocab);
    init.merges = std::move(merges);
    init.flavor = Flavor::standard;
    init.pretokenizer = options.pretokenizer;
    return TokenizerModel(std::move(init));
}

}  // namespace toklite
