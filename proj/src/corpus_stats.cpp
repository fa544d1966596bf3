#include "toklite/corpus_stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "toklite/encoder.hpp"

namespace toklite {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::uint64_t bigram_key(TokenId l, TokenId r) {
    return (static_cast<std::uint64_t>(l) << 32) | r;
}

// F2 in tree mode: for every token, the final occurrences of all tokens
// whose merge tree contains it. per_occurrence counts each slot in the
// tree; distinct counts each containing token once.
void fill_tree_f2(const TokenizerModel& model, const MergeGraph& graph, CorpusStats& stats) {
    const std::size_t n = model.size();
    stats.f2.assign(n, 0);
    if (stats.options.tree_multiplicity == TreeMultiplicity::per_occurrence) {
        // total(t) = f1(t) + sum over direct consumers c of total(c) per leg;
        // walking formation order backwards visits consumers first
        std::vector<std::uint64_t> total(n, 0);
        const auto& order = graph.formation_order();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            TokenId t = *it;
            total[t] += stats.f1[t];
            const auto& ps = graph.parents(t);
            if (!ps.empty()) {
                const auto& [l, r] = ps.front();
                total[l] += total[t];
                total[r] += total[t];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            stats.f2[i] = total[i] - stats.f1[i];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (stats.f1[i] == 0) continue;
            for (TokenId u : graph.subtree_tokens(static_cast<TokenId>(i))) {
                stats.f2[u] += stats.f1[i];
            }
        }
    }
}

}  // namespace

CorpusStats accumulate(const TokenizerModel& model, const DocumentSource& docs,
                       const StatsOptions& options) {
    if (options.f2_mode == F2Mode::tree && model.flavor() != Flavor::standard) {
        throw IntegrityError("stats: tree-mode F2 requires a standard-flavor model "
                             "(rank_greedy models have no unique merge tree)");
    }

    CorpusStats stats;
    stats.model_hash = model.content_hash();
    stats.flavor = model.flavor();
    stats.options = options;
    stats.f1.assign(model.size(), 0);
    stats.f2.assign(model.size(), 0);

    docs([&](std::string_view doc) {
        EncodeTrace trace = encode(model, doc);
        stats.total_docs += 1;
        stats.total_tokens += trace.final_ids.size();
        for (TokenId id : trace.final_ids) {
            stats.f1[id] += 1;
        }
        if (options.f2_mode == F2Mode::trace) {
            for (const Formation& f : trace.formations) {
                if (!f.survived) stats.f2[f.token] += 1;
            }
        }
        if (options.neighbor_scope == NeighborScope::document) {
            for (std::size_t i = 0; i + 1 < trace.final_ids.size(); ++i) {
                stats.bigrams[bigram_key(trace.final_ids[i], trace.final_ids[i + 1])] += 1;
            }
        } else {
            for (const auto& [begin, end] : trace.pretoken_spans) {
                for (std::size_t i = begin; i + 1 < end; ++i) {
                    stats.bigrams[bigram_key(trace.final_ids[i], trace.final_ids[i + 1])] += 1;
                }
            }
        }
    });

    if (options.f2_mode == F2Mode::tree) {
        MergeGraph graph = MergeGraph::build(model);
        fill_tree_f2(model, graph, stats);
    }
    return stats;
}

CorpusStats accumulate(const TokenizerModel& model, const std::vector<std::string>& docs,
                       const StatsOptions& options) {
    return accumulate(
        model,
        [&](const DocumentSink& sink) {
            for (const std::string& d : docs) sink(d);
        },
        options);
}

CorpusStats merge_shards(std::vector<CorpusStats> shards) {
    if (shards.empty()) {
        throw IntegrityError("merge: no shards");
    }
    CorpusStats out = std::move(shards.front());
    for (std::size_t i = 1; i < shards.size(); ++i) {
        CorpusStats& s = shards[i];
        if (s.model_hash != out.model_hash) {
            throw IntegrityError("merge: shard model hash mismatch (" + s.model_hash +
                                 " vs " + out.model_hash + ")");
        }
        if (!(s.options == out.options)) {
            throw IntegrityError("merge: shard options mismatch");
        }
        out.total_docs += s.total_docs;
        out.total_tokens += s.total_tokens;
        for (std::size_t t = 0; t < out.f1.size(); ++t) {
            out.f1[t] += s.f1[t];
            out.f2[t] += s.f2[t];
        }
        for (const auto& [key, count] : s.bigrams) {
            out.bigrams[key] += count;
        }
    }
    return out;
}

std::unordered_map<TokenId, std::uint64_t> CorpusStats::left_neighbors(TokenId t) const {
    std::unordered_map<TokenId, std::uint64_t> out;
    for (const auto& [key, count] : bigrams) {
        if (static_cast<TokenId>(key & 0xFFFFFFFF) == t) {
            out[static_cast<TokenId>(key >> 32)] += count;
        }
    }
    return out;
}

std::unordered_map<TokenId, std::uint64_t> CorpusStats::right_neighbors(TokenId t) const {
    std::unordered_map<TokenId, std::uint64_t> out;
    for (const auto& [key, count] : bigrams) {
        if (static_cast<TokenId>(key >> 32) == t) {
            out[static_cast<TokenId>(key & 0xFFFFFFFF)] += count;
        }
    }
    return out;
}

namespace {

double entropy_of_counts(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    if (total == 0) return 0.0;
    double s = 0.0;
    for (std::uint64_t c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / static_cast<double>(total);
        s -= p * std::log(p);
    }
    return s < 0.0 ? 0.0 : s;
}

}  // namespace

std::pair<double, double> neighbor_entropy(const CorpusStats& stats, TokenId t) {
    std::vector<std::uint64_t> left, right;
    for (const auto& [key, count] : stats.bigrams) {
        if (static_cast<TokenId>(key & 0xFFFFFFFF) == t) left.push_back(count);
        if (static_cast<TokenId>(key >> 32) == t) right.push_back(count);
    }
    return {entropy_of_counts(left), entropy_of_counts(right)};
}

EntropyTable compute_entropies(const CorpusStats& stats, std::size_t vocab_size) {
    EntropyTable table;
    table.s_left.assign(vocab_size, 0.0);
    table.s_right.assign(vocab_size, 0.0);

    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs(stats.bigrams.begin(),
                                                               stats.bigrams.end());
    // group by right token for S_left
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return (a.first & 0xFFFFFFFF) < (b.first & 0xFFFFFFFF);
    });
    std::vector<std::uint64_t> bucket;
    for (std::size_t i = 0; i < pairs.size();) {
        TokenId t = static_cast<TokenId>(pairs[i].first & 0xFFFFFFFF);
        bucket.clear();
        while (i < pairs.size() && static_cast<TokenId>(pairs[i].first & 0xFFFFFFFF) == t) {
            bucket.push_back(pairs[i].second);
            ++i;
        }
        if (t < vocab_size) table.s_left[t] = entropy_of_counts(bucket);
    }
    // group by left token for S_right
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
        TokenId t = static_cast<TokenId>(pairs[i].first >> 32);
        bucket.clear();
        while (i < pairs.size() && static_cast<TokenId>(pairs[i].first >> 32) == t) {
            bucket.push_back(pairs[i].second);
            ++i;
        }
        if (t < vocab_size) table.s_right[t] = entropy_of_counts(bucket);
    }
    return table;
}

void save_stats(std::ostream& out, const CorpusStats& stats,
                const std::string& run_config_json) {
    ordered_json doc;
    doc["format"] = "toklite.stats";
    doc["version"] = 1;
    doc["model_hash"] = stats.model_hash;
    doc["flavor"] = to_string(stats.flavor);
    doc["f2_mode"] = stats.options.f2_mode == F2Mode::trace ? "trace" : "tree";
    doc["neighbor_scope"] =
        stats.options.neighbor_scope == NeighborScope::document ? "document" : "pretoken";
    doc["tree_multiplicity"] =
        stats.options.tree_multiplicity == TreeMultiplicity::per_occurrence ? "per_occurrence"
                                                                            : "distinct";
    doc["total_docs"] = stats.total_docs;
    doc["total_tokens"] = stats.total_tokens;

    auto sparse = [](const std::vector<std::uint64_t>& v) {
        ordered_json arr = ordered_json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] != 0) arr.push_back({i, v[i]});
        }
        return arr;
    };
    doc["vocab_size"] = stats.f1.size();
    doc["f1"] = sparse(stats.f1);
    doc["f2"] = sparse(stats.f2);

    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs(stats.bigrams.begin(),
                                                               stats.bigrams.end());
    std::sort(pairs.begin(), pairs.end());
    ordered_json bigrams = ordered_json::array();
    for (const auto& [key, count] : pairs) {
        bigrams.push_back({key >> 32, key & 0xFFFFFFFF, count});
    }
    doc["bigrams"] = std::move(bigrams);
    if (!run_config_json.empty()) {
        doc["run_config"] = json::parse(run_config_json);
    }
    out << doc.dump() << "\n";
}

CorpusStats load_stats(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("stats file: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "toklite.stats" ||
            doc.at("version").get<int>() != 1) {
            throw ParseError("stats file: unknown format/version");
        }
        CorpusStats stats;
        stats.model_hash = doc.at("model_hash").get<std::string>();
        stats.flavor = flavor_from_string(doc.at("flavor").get<std::string>());
        stats.options.f2_mode =
            doc.at("f2_mode").get<std::string>() == "trace" ? F2Mode::trace : F2Mode::tree;
        stats.options.neighbor_scope = doc.at("neighbor_scope").get<std::string>() == "document"
                                           ? NeighborScope::document
                                           : NeighborScope::pretoken;
        stats.options.tree_multiplicity =
            doc.at("tree_multiplicity").get<std::string>() == "per_occurrence"
                ? TreeMultiplicity::per_occurrence
                : TreeMultiplicity::distinct;
        stats.total_docs = doc.at("total_docs").get<std::uint64_t>();
        stats.total_tokens = doc.at("total_tokens").get<std::uint64_t>();
        std::size_t n = doc.at("vocab_size").get<std::size_t>();
        stats.f1.assign(n, 0);
        stats.f2.assign(n, 0);
        for (const auto& e : doc.at("f1")) {
            stats.f1.at(e.at(0).get<std::size_t>()) = e.at(1).get<std::uint64_t>();
        }
        for (const auto& e : doc.at("f2")) {
            stats.f2.at(e.at(0).get<std::size_t>()) = e.at(1).get<std::uint64_t>();
        }
        for (const auto& e : doc.at("bigrams")) {
            stats.bigrams[bigram_key(e.at(0).get<TokenId>(), e.at(1).get<TokenId>())] =
                e.at(2).get<std::uint64_t>();
        }
        return stats;
    } catch (const json::exception& e) {
        throw ParseError(std::string("stats file: ") + e.what());
    }
}

CorpusStats load_stats_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open stats file: " + path);
    }
    return load_stats(in);
}

}  // namespace toklite
