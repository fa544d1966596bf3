#pragma once

#include <string>
#include <vector>

#include "toklite/model.hpp"

namespace toklite {

struct TrainOptions {
    std::size_t target_vocab = 512;
    PretokenizerConfig pretokenizer;
    // include all 256 byte tokens as the initial alphabet instead of only
    // the bytes observed in the corpus
    bool full_byte_alphabet = false;
};

// Desk-scale BPE trainer: merges the most frequent adjacent pair until the
// vocabulary reaches target_vocab or no pair repeats. Ties break on
// lexicographic (left bytes, right bytes). Deterministic.
TokenizerModel train_tiny(const std::vector<std::string>& docs, const TrainOptions& options);

}  // namespace toklite
