#pragma once

#include <string>
#include <vector>

#include "toklite/model.hpp"

namespace toklite::testutil {

// Builds a standard-flavor model from token strings; merges are given as
// (left, right) byte strings in rank order and must resolve inside vocab.
inline TokenizerModel make_standard(std::vector<std::string> vocab,
                                    std::vector<std::pair<std::string, std::string>> merges,
                                    PretokenizerMode mode = PretokenizerMode::none,
                                    std::vector<std::string> specials = {}) {
    TokenizerModel::Init init;
    init.vocab = vocab;
    auto id_of = [&](const std::string& s) {
        for (std::size_t i = 0; i < vocab.size(); ++i) {
            if (vocab[i] == s) return static_cast<TokenId>(i);
        }
        throw std::runtime_error("test vocab missing: " + s);
    };
    std::uint32_t rank = 0;
    for (const auto& [l, r] : merges) {
        init.merges.push_back(MergeRule{rank++, id_of(l), id_of(r), id_of(l + r)});
    }
    for (const auto& s : specials) init.specials.push_back(id_of(s));
    init.flavor = Flavor::standard;
    init.pretokenizer.mode = mode;
    return TokenizerModel(std::move(init));
}

// Builds a rank_greedy model; rank = position in the list.
inline TokenizerModel make_rank_greedy(std::vector<std::string> vocab_by_rank,
                                       PretokenizerMode mode = PretokenizerMode::none) {
    TokenizerModel::Init init;
    init.vocab = std::move(vocab_by_rank);
    init.ranks.resize(init.vocab.size());
    for (std::size_t i = 0; i < init.ranks.size(); ++i) {
        init.ranks[i] = static_cast<std::uint32_t>(i);
    }
    init.flavor = Flavor::rank_greedy;
    init.pretokenizer.mode = mode;
    return TokenizerModel(std::move(init));
}

// Word-family vocabulary where "ruptions" is a word-final residue: almost
// always consumed into " interruptions", surfacing only in the rare
// " corruptions", and splitting into a parent pair the surviving merges can
// re-merge across the original token boundary.
inline TokenizerModel make_ruptions_model() {
    return make_standard(
        {" ", "c", "o", "r", "u", "p", "t", "i", "n", "s", "e", "d",
         " c", "or", " cor", "ru", "pt", "io", "ptio", "ption", "ruption",
         "ruptions", " corruption", " i", "te", "nte", " inte", " inter",
         " interruptions", " interruption"},
        {{" ", "c"},      {"o", "r"},       {" c", "or"},     {"r", "u"},
         {"p", "t"},      {"i", "o"},       {"pt", "io"},     {"ptio", "n"},
         {"ru", "ption"}, {"ruption", "s"}, {" cor", "ruption"},
         {" ", "i"},      {"t", "e"},       {"n", "te"},      {" i", "nte"},
         {" inte", "r"},  {" inter", "ruptions"}, {" inter", "ruption"}},
        PretokenizerMode::whitespace_prefix);
}

// Companion corpus: identify with thresholds (0.1, 0.3) flags "ruptions"
// (and other never-final scaffolding) while keeping " cor", "ruption" and
// " corruption".
inline std::vector<std::string> ruptions_corpus() {
    std::vector<std::string> corpus;
    auto add = [&](int n, const char* doc) {
        for (int i = 0; i < n; ++i) corpus.push_back(doc);
    };
    add(13, " interruptions core");
    add(12, " interruptions corn");
    add(10, " interruption core");
    add(10, " interruption corn");
    add(8, " corruption core");
    add(8, " corruption corn");
    add(8, " eruption core");
    add(7, " disruption end");
    add(2, " corruptions end");
    return corpus;
}

}  // namespace toklite::testutil
