#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "toklite/corpus_stats.hpp"

namespace toklite {

// Corpus inputs: plain-text files (one document per line) and .jsonl /
// .ndjson files (one JSON object per line, text under `text_field`).
// Directories are walked recursively; paths are visited in sorted order so
// runs are reproducible.
struct CorpusOptions {
    std::string text_field = "text";
    std::uint64_t sample = 0;  // 0 = all documents; otherwise reservoir size
    std::uint64_t seed = 0;
};

std::vector<std::string> expand_corpus_paths(const std::vector<std::string>& paths);

// Calls `sink` once per document. With sampling enabled, documents are
// drawn by seeded reservoir sampling and replayed in draw order.
void for_each_document(const std::vector<std::string>& paths, const CorpusOptions& options,
                       const DocumentSink& sink);

std::vector<std::string> read_corpus(const std::vector<std::string>& paths,
                                     const CorpusOptions& options = {});

}  // namespace toklite
