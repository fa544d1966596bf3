#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "toklite/merge_graph.hpp"
#include "toklite/model.hpp"

namespace toklite {

enum class F2Mode { trace, tree };
enum class NeighborScope { document, pretoken };
// In tree mode, whether a token occurring twice inside one descendant's
// merge tree contributes twice or once to F2.
enum class TreeMultiplicity { per_occurrence, distinct };

struct StatsOptions {
    F2Mode f2_mode = F2Mode::tree;
    NeighborScope neighbor_scope = NeighborScope::document;
    TreeMultiplicity tree_multiplicity = TreeMultiplicity::per_occurrence;

    bool operator==(const StatsOptions&) const = default;
};

// Per-token counters over a tokenized corpus. Also serves as one shard of a
// partitioned run; shards merge associatively and commutatively.
struct CorpusStats {
    std::string model_hash;
    Flavor flavor = Flavor::standard;
    StatsOptions options;
    std::uint64_t total_docs = 0;
    std::uint64_t total_tokens = 0;
    std::vector<std::uint64_t> f1;  // final occurrences
    std::vector<std::uint64_t> f2;  // formed-then-consumed occurrences
    // adjacent final-id pairs, keyed (left << 32) | right
    std::unordered_map<std::uint64_t, std::uint64_t> bigrams;

    // small per-token views; linear in the bigram table, meant for tests
    // and single-token queries
    std::unordered_map<TokenId, std::uint64_t> left_neighbors(TokenId t) const;
    std::unordered_map<TokenId, std::uint64_t> right_neighbors(TokenId t) const;
};

using DocumentSink = std::function<void(std::string_view)>;
using DocumentSource = std::function<void(const DocumentSink&)>;

// Streams every document through the tokenizer and accumulates counters.
// tree mode requires a standard-flavor model; F2 is derived from F1 and the
// merge graph after the pass. Neighbor pairs cross pretoken boundaries when
// neighbor_scope == document, and never cross documents.
CorpusStats accumulate(const TokenizerModel& model, const DocumentSource& docs,
                       const StatsOptions& options = {});

CorpusStats accumulate(const TokenizerModel& model, const std::vector<std::string>& docs,
                       const StatsOptions& options = {});

// Element-wise sum. Shards must share model hash and options.
CorpusStats merge_shards(std::vector<CorpusStats> shards);

// (S_left, S_right) in nats, maximum-likelihood estimate, no smoothing.
// A side with no observations scores 0.
std::pair<double, double> neighbor_entropy(const CorpusStats& stats, TokenId t);

// Entropies for every token in one pass over the bigram table.
struct EntropyTable {
    std::vector<double> s_left;
    std::vector<double> s_right;
};
EntropyTable compute_entropies(const CorpusStats& stats, std::size_t vocab_size);

// Versioned JSON persistence; deterministic byte-for-byte for equal inputs.
void save_stats(std::ostream& out, const CorpusStats& stats,
                const std::string& run_config_json = "");
CorpusStats load_stats(std::istream& in);
CorpusStats load_stats_file(const std::string& path);

}  // namespace toklite
