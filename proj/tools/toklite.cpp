// toklite: analyze BPE tokenizers for rarely-surfacing intermediate tokens,
// prune them, and re-encode text with the pruned vocabulary.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "toklite/bytes.hpp"
#include "toklite/corpus_io.hpp"
#include "toklite/corpus_stats.hpp"
#include "toklite/encoder.hpp"
#include "toklite/lite.hpp"
#include "toklite/merge_graph.hpp"
#include "toklite/model_io.hpp"
#include "toklite/residue.hpp"
#include "toklite/savings.hpp"
#include "toklite/trainer.hpp"

namespace {

using namespace toklite;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

std::string g_run_config;  // JSON echo of the invocation, embedded in artifacts

std::string run_config_json(int argc, char** argv) {
    ordered_json doc;
    doc["tool"] = "toklite";
    ordered_json args = ordered_json::array();
    for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
    doc["argv"] = std::move(args);
    return doc.dump();
}

unsigned default_threads() {
    if (const char* env = std::getenv("TOKLITE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return 1;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot open output file: " + path);
    }
    return out;
}

// shared model-input flags: either a native model file or raw assets
struct ModelArgs {
    std::string native;
    std::string hf_vocab;
    std::string hf_merges;
    std::string tiktoken;
    std::string pretokenizer = "whitespace_prefix";
    std::string byte_level = "auto";
    std::vector<std::string> specials;

    void attach(CLI::App* cmd, bool native_only = false) {
        cmd->add_option("--model", native, "native model or pruned-tokenizer JSON file");
        if (!native_only) {
            cmd->add_option("--hf-vocab", hf_vocab, "HF-style vocab.json");
            cmd->add_option("--hf-merges", hf_merges, "HF-style merges.txt");
            cmd->add_option("--tiktoken", tiktoken, "tiktoken rank file (base64 rank lines)");
            cmd->add_option("--pretokenizer", pretokenizer,
                            "pretokenizer for raw assets: whitespace_prefix|byte_level_regex|none");
            cmd->add_option("--byte-level", byte_level,
                            "vocab byte-level decoding for HF assets: auto|yes|no");
            cmd->add_option("--special", specials, "special token string (repeatable)");
        }
    }

    TokenizerModel load() const {
        int sources = (!native.empty()) + (!hf_vocab.empty() || !hf_merges.empty()) +
                      (!tiktoken.empty());
        if (sources != 1) {
            throw CLI::ValidationError(
                "model", "give exactly one of --model, --hf-vocab/--hf-merges, --tiktoken");
        }
        if (!native.empty()) {
            return load_model_file(native);
        }
        LoadOptions options;
        options.pretokenizer.mode = pretokenizer_mode_from_string(pretokenizer);
        options.special_tokens = specials;
        if (byte_level == "auto") {
            options.byte_level = ByteLevelVocab::detect;
        } else if (byte_level == "yes") {
            options.byte_level = ByteLevelVocab::yes;
        } else if (byte_level == "no") {
            options.byte_level = ByteLevelVocab::no;
        } else {
            throw CLI::ValidationError("--byte-level", "expected auto|yes|no");
        }
        if (!tiktoken.empty()) {
            std::ifstream in(tiktoken, std::ios::binary);
            if (!in) throw ParseError("cannot open rank file: " + tiktoken);
            return load_tiktoken(in, options);
        }
        if (hf_vocab.empty() || hf_merges.empty()) {
            throw CLI::ValidationError("model", "--hf-vocab and --hf-merges go together");
        }
        std::ifstream v(hf_vocab, std::ios::binary);
        if (!v) throw ParseError("cannot open vocab file: " + hf_vocab);
        std::ifstream m(hf_merges, std::ios::binary);
        if (!m) throw ParseError("cannot open merges file: " + hf_merges);
        return load_hf(v, m, options);
    }
};

struct CorpusArgs {
    std::vector<std::string> paths;
    std::string text_field = "text";
    std::uint64_t sample = 0;
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("--corpus", paths,
                                    "corpus files or directories (.txt: one doc per line; "
                                    ".jsonl: one object per line)");
        if (required) opt->required();
        cmd->add_option("--text-field", text_field, "text field name for .jsonl inputs");
        cmd->add_option("--sample", sample, "reservoir-sample this many documents");
        cmd->add_option("--seed", seed, "sampling seed");
    }

    CorpusOptions options() const { return CorpusOptions{text_field, sample, seed}; }
};

StatsOptions stats_options(const std::string& f2_mode, const std::string& scope,
                           const std::string& multiplicity, Flavor flavor,
                           bool f2_mode_given) {
    StatsOptions options;
    std::string mode = f2_mode;
    if (!f2_mode_given) {
        // merge-path statistics follow the structure the encoder actually
        // uses: the unique tree for standard models, traces for rank_greedy
        mode = flavor == Flavor::standard ? "tree" : "trace";
    }
    if (mode == "trace") {
        options.f2_mode = F2Mode::trace;
    } else if (mode == "tree") {
        options.f2_mode = F2Mode::tree;
    } else {
        throw CLI::ValidationError("--f2-mode", "expected trace|tree");
    }
    if (scope == "document") {
        options.neighbor_scope = NeighborScope::document;
    } else if (scope == "pretoken") {
        options.neighbor_scope = NeighborScope::pretoken;
    } else {
        throw CLI::ValidationError("--neighbor-scope", "expected document|pretoken");
    }
    if (multiplicity == "count") {
        options.tree_multiplicity = TreeMultiplicity::per_occurrence;
    } else if (multiplicity == "unique") {
        options.tree_multiplicity = TreeMultiplicity::distinct;
    } else {
        throw CLI::ValidationError("--tree-multiplicity", "expected count|unique");
    }
    return options;
}

int cmd_train(const std::vector<std::string>& corpus_paths, const CorpusArgs& corpus,
              std::uint64_t target_vocab, const std::string& pretokenizer, bool byte_alphabet,
              const std::string& output) {
    TrainOptions options;
    options.target_vocab = target_vocab;
    options.pretokenizer.mode = pretokenizer_mode_from_string(pretokenizer);
    options.full_byte_alphabet = byte_alphabet;
    std::vector<std::string> docs = read_corpus(corpus_paths, corpus.options());
    TokenizerModel model = train_tiny(docs, options);
    std::ofstream out = open_output(output);
    save_native(out, model, nullptr, g_run_config);
    std::cerr << "trained " << model.size() << " tokens (" << model.merges().size()
              << " merges) -> " << output << "\n";
    return 0;
}

int cmd_analyze(const ModelArgs& margs, const CorpusArgs& corpus, const std::string& f2_mode,
                bool f2_mode_given, const std::string& scope, const std::string& multiplicity,
                unsigned threads, const std::string& output) {
    TokenizerModel model = margs.load();
    StatsOptions options =
        stats_options(f2_mode, scope, multiplicity, model.flavor(), f2_mode_given);

    CorpusStats stats;
    if (threads <= 1) {
        stats = accumulate(
            model,
            [&](const DocumentSink& sink) { for_each_document(corpus.paths, corpus.options(), sink); },
            options);
    } else {
        // deterministic fan-out: documents go to shard (index mod threads);
        // the merge below is in fixed shard order
        std::vector<std::string> docs = read_corpus(corpus.paths, corpus.options());
        std::vector<CorpusStats> shards(threads);
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                shards[w] = accumulate(
                    model,
                    [&](const DocumentSink& sink) {
                        for (std::size_t i = w; i < docs.size(); i += threads) sink(docs[i]);
                    },
                    options);
            });
        }
        for (auto& t : workers) t.join();
        stats = merge_shards(std::move(shards));
    }

    std::ofstream out = open_output(output);
    save_stats(out, stats, g_run_config);
    std::cerr << "analyzed " << stats.total_docs << " docs, " << stats.total_tokens
              << " tokens -> " << output << "\n";
    return 0;
}

int cmd_merge(const std::vector<std::string>& inputs, const std::string& output) {
    std::vector<CorpusStats> shards;
    for (const std::string& path : inputs) {
        shards.push_back(load_stats_file(path));
    }
    CorpusStats merged = merge_shards(std::move(shards));
    std::ofstream out = open_output(output);
    save_stats(out, merged, g_run_config);
    return 0;
}

void write_imr_file(const std::string& path, const ResidueReport& report) {
    ordered_json doc;
    doc["format"] = "toklite.imr";
    doc["version"] = 1;
    doc["model_hash"] = report.model_hash;
    doc["thresholds"] = {{"ratio", report.thresholds.ratio},
                         {"entropy", report.thresholds.entropy}};
    doc["ids"] = report.imr;
    if (!g_run_config.empty()) doc["run_config"] = nlohmann::json::parse(g_run_config);
    std::ofstream out = open_output(path);
    out << doc.dump(1, '\t') << "\n";
}

std::vector<TokenId> read_imr_file(const std::string& path, const std::string& model_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open imr file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
        if (doc.at("format").get<std::string>() != "toklite.imr") {
            throw ParseError("imr file: unknown format");
        }
        std::string hash = doc.at("model_hash").get<std::string>();
        if (hash != model_hash) {
            throw IntegrityError("imr file was built for model " + hash + ", not " +
                                 model_hash);
        }
        return doc.at("ids").get<std::vector<TokenId>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("imr file: ") + e.what());
    }
}

int cmd_identify(const std::string& model_path, const std::string& stats_path, double ratio,
                 double entropy, const std::string& report_path, const std::string& imr_path) {
    TokenizerModel model = load_model_file(model_path);
    CorpusStats stats = load_stats_file(stats_path);
    ResidueReport report = classify(stats, model, Thresholds{ratio, entropy});

    if (!report_path.empty()) {
        std::ofstream out = open_output(report_path);
        ordered_json meta;
        meta["format"] = "toklite.report";
        meta["version"] = 1;
        meta["model_hash"] = report.model_hash;
        meta["thresholds"] = {{"ratio", ratio}, {"entropy", entropy}};
        meta["ascii_vocab"] = report.ascii_vocab;
        meta["low_ratio_count"] = report.low_ratio_count;
        meta["imr_count"] = report.imr.size();
        if (!g_run_config.empty()) meta["run_config"] = nlohmann::json::parse(g_run_config);
        out << meta.dump() << "\n";
        write_report_jsonl(out, report, model);
    }
    if (!imr_path.empty()) {
        write_imr_file(imr_path, report);
    }
    std::cout << format_summary(report, model);
    return 0;
}

int cmd_prune(const std::string& model_path, const std::string& imr_path,
              const std::string& output) {
    TokenizerModel model = load_model_file(model_path);
    std::vector<TokenId> imr = read_imr_file(imr_path, model.content_hash());
    LiteTokenizer lite(std::move(model), imr);
    std::ofstream out = open_output(output);
    lite.save(out, g_run_config);
    std::cerr << "pruned " << lite.removed_ids().size() << " tokens -> " << output << "\n";
    return 0;
}

int cmd_export_mask(const std::string& lite_path, const std::string& ids_path,
                    const std::string& bitmask_path) {
    LiteTokenizer lite = LiteTokenizer::load_file(lite_path);
    if (!ids_path.empty()) {
        ordered_json doc;
        doc["format"] = "toklite.mask";
        doc["model_hash"] = lite.base().content_hash();
        doc["vocab_size"] = lite.base().size();
        doc["removed_ids"] = lite.removed_ids();
        if (!g_run_config.empty()) doc["run_config"] = nlohmann::json::parse(g_run_config);
        std::ofstream out = open_output(ids_path);
        out << doc.dump(1, '\t') << "\n";
    }
    if (!bitmask_path.empty()) {
        std::ofstream out = open_output(bitmask_path);
        std::string mask = lite.bitmask();
        out.write(mask.data(), static_cast<std::streamsize>(mask.size()));
    }
    return 0;
}

LiteMode lite_mode_from_flag(const std::string& mode) {
    if (mode == "split-only") return LiteMode::split_only;
    if (mode == "split-remerge") return LiteMode::split_remerge;
    if (mode == "incremental") return LiteMode::incremental;
    throw CLI::ValidationError("--mode", "expected original|split-only|split-remerge|incremental");
}

int cmd_encode(const std::string& model_path, const std::string& lite_path,
               const std::string& mode, const std::string& input_path,
               const std::string& output_path, bool show_tokens, bool compare) {
    if (model_path.empty() == lite_path.empty()) {
        throw CLI::ValidationError("encode", "give exactly one of --model or --lite");
    }
    std::optional<LiteTokenizer> lite;
    std::optional<TokenizerModel> plain;
    if (!lite_path.empty()) {
        lite.emplace(LiteTokenizer::load_file(lite_path));
    } else {
        plain.emplace(load_model_file(model_path));
    }
    const TokenizerModel& model = lite ? lite->base() : *plain;

    if (mode != "original" && !lite) {
        throw CLI::ValidationError("--mode", "split modes need a pruned tokenizer (--lite)");
    }

    std::istream* in = &std::cin;
    std::ifstream file_in;
    if (!input_path.empty() && input_path != "-") {
        file_in.open(input_path, std::ios::binary);
        if (!file_in) throw ParseError("cannot open input: " + input_path);
        in = &file_in;
    }
    std::ostream* out = &std::cout;
    std::ofstream file_out;
    if (!output_path.empty() && output_path != "-") {
        file_out = open_output(output_path);
        out = &file_out;
        *out << "# toklite encode model_hash=" << model.content_hash()
             << " config=" << g_run_config << "\n";
    }

    auto render = [&](const std::vector<TokenId>& ids) {
        std::string line;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i) line += show_tokens ? "|" : " ";
            line += show_tokens ? display_token(model.bytes(ids[i])) : std::to_string(ids[i]);
        }
        return line;
    };

    std::uint64_t lines = 0, base_total = 0, other_total = 0;
    std::string doc;
    while (std::getline(*in, doc)) {
        if (!doc.empty() && doc.back() == '\r') doc.pop_back();
        std::vector<TokenId> base_ids = encode(model, doc).final_ids;
        std::vector<TokenId> ids;
        if (mode == "original") {
            ids = base_ids;
        } else {
            ids = lite->encode(doc, lite_mode_from_flag(mode)).ids;
        }
        ++lines;
        base_total += base_ids.size();
        other_total += ids.size();
        if (compare) {
            *out << base_ids.size() << " " << ids.size() << "\n";
        } else {
            *out << render(ids) << "\n";
        }
    }
    if (compare && lines > 0) {
        double base_avg = static_cast<double>(base_total) / static_cast<double>(lines);
        double other_avg = static_cast<double>(other_total) / static_cast<double>(lines);
        std::cerr << "docs " << lines << "  avg tokens: original " << base_avg << ", " << mode
                  << " " << other_avg << " (x" << (base_avg > 0 ? other_avg / base_avg : 0)
                  << ")\n";
    }
    return 0;
}

int cmd_savings(const SavingsInput& input, const std::string& json_path) {
    SavingsReport report = compute_savings(input);
    if (!json_path.empty()) {
        ordered_json doc;
        doc["format"] = "toklite.savings";
        doc["input"] = {{"vocab_size", input.vocab_size},
                        {"removed_fraction", input.removed_fraction},
                        {"hidden_dim", input.hidden_dim},
                        {"tied_embedding", input.tied_embedding},
                        {"total_params", input.total_params},
                        {"sequence_length", input.sequence_length}};
        doc["param_saved_pct"] = report.param_saved_pct;
        doc["flops_first_saved_pct"] = report.flops_first_saved_pct;
        doc["flops_cache_saved_pct"] = report.flops_cache_saved_pct;
        doc["estimated_layers"] = report.estimated_layers;
        doc["accounting"] =
            "2 flops per non-input-embedding param per position; output projection counted "
            "even when tied; attention estimated with layers = body/(12*hidden^2); input "
            "embedding lookups are free";
        if (!g_run_config.empty()) doc["run_config"] = nlohmann::json::parse(g_run_config);
        std::ofstream out = open_output(json_path);
        out << doc.dump(1, '\t') << "\n";
    }
    std::cout << format_savings(input, report);
    return 0;
}

int cmd_sweep(const std::string& model_path, const std::string& stats_path,
              const std::vector<double>& ratio_grid, const std::vector<double>& entropy_grid,
              const CorpusArgs& corpus, const std::string& output) {
    TokenizerModel model = load_model_file(model_path);
    CorpusStats stats = load_stats_file(stats_path);
    std::vector<SweepRow> rows = sweep(stats, model, ratio_grid, entropy_grid);

    std::vector<std::string> held_out;
    std::uint64_t base_total = 0;
    if (!corpus.paths.empty()) {
        held_out = read_corpus(corpus.paths, corpus.options());
        for (const std::string& doc : held_out) {
            base_total += encode(model, doc).final_ids.size();
        }
    }

    std::ofstream out = open_output(output);
    out << "# toklite sweep model_hash=" << model.content_hash() << " config=" << g_run_config
        << "\n";
    out << "ratio,entropy,imr_count,ascii_vocab_pct";
    if (!held_out.empty()) out << ",token_inflation";
    out << "\n";
    for (const SweepRow& row : rows) {
        out << row.ratio << "," << row.entropy << "," << row.imr_count << ","
            << row.ascii_vocab_pct;
        if (!held_out.empty()) {
            ResidueReport report =
                classify(stats, model, Thresholds{row.ratio, row.entropy});
            LiteTokenizer lite(model, report.imr);
            std::uint64_t total = 0;
            for (const std::string& doc : held_out) {
                total += lite.encode(doc, LiteMode::split_remerge).ids.size();
            }
            out << "," << (base_total ? static_cast<double>(total) / base_total : 0.0);
        }
        out << "\n";
    }
    return 0;
}

int cmd_graph(const std::string& model_path, const std::string& token,
              std::int64_t token_id, const std::string& format, int up,
              const std::string& output) {
    TokenizerModel model = load_model_file(model_path);
    TokenId root;
    if (token_id >= 0) {
        root = static_cast<TokenId>(token_id);
        model.bytes(root);  // range check
    } else {
        // accept the display convention for leading spaces
        std::string bytes = token;
        std::string spaces;
        while (bytes.rfind("␣", 0) == 0) {
            spaces += " ";
            bytes = bytes.substr(3);
        }
        bytes = spaces + bytes;
        auto found = model.find(bytes);
        if (!found) throw IntegrityError("graph: token not in vocabulary: " + token);
        root = *found;
    }
    MergeGraph graph = MergeGraph::build(model);
    std::string rendered = format == "dot" ? render_merge_tree_dot(model, graph, root, up)
                                           : render_merge_tree_json(model, graph, root, up);
    if (output.empty() || output == "-") {
        std::cout << rendered;
    } else {
        std::ofstream out = open_output(output);
        out << rendered;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    g_run_config = run_config_json(argc, argv);

    CLI::App app{"corpus-driven BPE vocabulary pruning"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "train a desk-scale BPE tokenizer");
    CorpusArgs train_corpus;
    train_corpus.attach(train);
    std::uint64_t target_vocab = 512;
    std::string train_pretok = "whitespace_prefix";
    bool byte_alphabet = false;
    std::string train_output;
    train->add_option("--target-vocab", target_vocab, "vocabulary size to stop at");
    train->add_option("--pretokenizer", train_pretok, "whitespace_prefix|byte_level_regex|none");
    train->add_flag("--byte-alphabet", byte_alphabet, "seed all 256 bytes as base tokens");
    train->add_option("--output", train_output, "native model JSON path")->required();

    // convert
    auto* convert = app.add_subcommand("convert", "convert raw tokenizer assets to the native format");
    ModelArgs convert_model;
    convert_model.attach(convert);
    std::string convert_output;
    convert->add_option("--output", convert_output, "native model JSON path")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "stream a corpus and collect counters");
    ModelArgs analyze_model;
    analyze_model.attach(analyze);
    CorpusArgs analyze_corpus;
    analyze_corpus.attach(analyze);
    std::string f2_mode = "tree", scope = "document", multiplicity = "count";
    unsigned threads = default_threads();
    std::string analyze_output;
    auto* f2_opt = analyze->add_option("--f2-mode", f2_mode,
                                       "trace|tree (default: tree for standard models, "
                                       "trace for rank_greedy)");
    analyze->add_option("--neighbor-scope", scope, "document|pretoken");
    analyze->add_option("--tree-multiplicity", multiplicity,
                        "count|unique occurrences inside one descendant");
    analyze->add_option("--threads", threads, "worker shards (env TOKLITE_THREADS)");
    analyze->add_option("--output", analyze_output, "stats JSON path")->required();

    // merge
    auto* merge = app.add_subcommand("merge", "merge stats shards");
    std::vector<std::string> merge_inputs;
    std::string merge_output;
    merge->add_option("--inputs", merge_inputs, "stats files")->required()->expected(-1);
    merge->add_option("--output", merge_output, "merged stats path")->required();

    // identify
    auto* identify = app.add_subcommand("identify", "score tokens and emit the removal set");
    std::string id_model, id_stats, id_report, id_imr;
    double ratio_threshold = 0, entropy_threshold = 0;
    identify->add_option("--model", id_model, "native model JSON")->required();
    identify->add_option("--stats", id_stats, "stats file from analyze")->required();
    identify
        ->add_option("-r,--ratio-threshold", ratio_threshold,
                     "final/intermediate ratio threshold (explicit, no default)")
        ->required();
    identify
        ->add_option("-s,--entropy-threshold", entropy_threshold,
                     "neighbor entropy threshold in nats (explicit, no default)")
        ->required();
    identify->add_option("--report", id_report, "per-token JSONL report path");
    identify->add_option("--imr", id_imr, "removal-set JSON path");

    // prune
    auto* prune = app.add_subcommand("prune", "apply a removal set to a model");
    std::string prune_model, prune_imr, prune_output;
    prune->add_option("--model", prune_model, "native model JSON")->required();
    prune->add_option("--imr", prune_imr, "removal set from identify")->required();
    prune->add_option("--output", prune_output, "pruned tokenizer path")->required();

    // export-mask
    auto* mask = app.add_subcommand("export-mask", "emit removed ids and a dense bitmask");
    std::string mask_lite, mask_ids, mask_bits;
    mask->add_option("--lite", mask_lite, "pruned tokenizer file")->required();
    mask->add_option("--ids", mask_ids, "JSON id-list path");
    mask->add_option("--bitmask", mask_bits, "raw little-endian bitmask path");

    // encode
    auto* enc = app.add_subcommand("encode", "encode text, one document per line");
    std::string enc_model, enc_lite, enc_mode = "original", enc_input, enc_output;
    bool show_tokens = false, compare = false;
    enc->add_option("--model", enc_model, "native model JSON (original mode only)");
    enc->add_option("--lite", enc_lite, "pruned tokenizer file");
    enc->add_option("--mode", enc_mode, "original|split-only|split-remerge|incremental");
    enc->add_option("--input", enc_input, "input file, - for stdin");
    enc->add_option("--output", enc_output, "output file, - for stdout");
    enc->add_flag("--show-tokens", show_tokens, "print token strings joined by | instead of ids");
    enc->add_flag("--compare", compare, "print per-line original and selected-mode counts");

    // savings
    auto* savings = app.add_subcommand("savings", "estimate parameter and flop savings");
    SavingsInput sin;
    std::string savings_json;
    bool untied = false;
    savings->add_option("--vocab-size", sin.vocab_size)->required();
    savings->add_option("--removed-fraction", sin.removed_fraction)->required();
    savings->add_option("--hidden-dim", sin.hidden_dim)->required();
    savings->add_flag("--untied", untied, "separate input/output embeddings");
    savings->add_option("--total-params", sin.total_params)->required();
    savings->add_option("--sequence-length", sin.sequence_length)->required();
    savings->add_option("--json", savings_json, "also write a JSON report");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "threshold grid to CSV");
    std::string sweep_model, sweep_stats, sweep_output;
    std::vector<double> ratio_grid, entropy_grid;
    CorpusArgs sweep_corpus;
    sweep_cmd->add_option("--model", sweep_model)->required();
    sweep_cmd->add_option("--stats", sweep_stats)->required();
    sweep_cmd->add_option("--ratio-grid", ratio_grid, "ratio thresholds")
        ->required()
        ->expected(-1);
    sweep_cmd->add_option("--entropy-grid", entropy_grid, "entropy thresholds")
        ->required()
        ->expected(-1);
    sweep_corpus.attach(sweep_cmd, /*required=*/false);
    sweep_cmd->add_option("--output", sweep_output, "CSV path")->required();

    // graph
    auto* graph = app.add_subcommand("graph", "export a merge tree as DOT or JSON");
    std::string graph_model, graph_token, graph_format = "dot", graph_output;
    std::int64_t graph_token_id = -1;
    int graph_up = 0;
    graph->add_option("--model", graph_model)->required();
    graph->add_option("--token", graph_token, "token string (leading ␣ accepted)");
    graph->add_option("--token-id", graph_token_id, "token id");
    graph->add_option("--format", graph_format, "dot|json");
    graph->add_option("--up", graph_up, "levels of consuming tokens to include");
    graph->add_option("--output", graph_output, "output path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*train) {
            return cmd_train(train_corpus.paths, train_corpus, target_vocab, train_pretok,
                             byte_alphabet, train_output);
        }
        if (*convert) {
            TokenizerModel model = convert_model.load();
            std::ofstream out = open_output(convert_output);
            save_native(out, model, nullptr, g_run_config);
            std::cerr << "wrote " << model.size() << " tokens (" << to_string(model.flavor())
                      << ") -> " << convert_output << "\n";
            return 0;
        }
        if (*analyze) {
            return cmd_analyze(analyze_model, analyze_corpus, f2_mode, f2_opt->count() > 0,
                               scope, multiplicity, threads, analyze_output);
        }
        if (*merge) return cmd_merge(merge_inputs, merge_output);
        if (*identify) {
            return cmd_identify(id_model, id_stats, ratio_threshold, entropy_threshold,
                                id_report, id_imr);
        }
        if (*prune) return cmd_prune(prune_model, prune_imr, prune_output);
        if (*mask) return cmd_export_mask(mask_lite, mask_ids, mask_bits);
        if (*enc) {
            return cmd_encode(enc_model, enc_lite, enc_mode, enc_input, enc_output,
                              show_tokens, compare);
        }
        if (*savings) {
            sin.tied_embedding = !untied;
            return cmd_savings(sin, savings_json);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep_model, sweep_stats, ratio_grid, entropy_grid, sweep_corpus,
                             sweep_output);
        }
        if (*graph) {
            if (graph_token.empty() && graph_token_id < 0) {
                throw CLI::ValidationError("graph", "give --token or --token-id");
            }
            return cmd_graph(graph_model, graph_token, graph_token_id, graph_format, graph_up,
                             graph_output);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
