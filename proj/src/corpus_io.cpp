#include "toklite/corpus_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

namespace toklite {

namespace fs = std::filesystem;

std::vector<std::string> expand_corpus_paths(const std::vector<std::string>& paths) {
    std::vector<std::string> files;
    for (const std::string& p : paths) {
        fs::path path(p);
        if (fs::is_directory(path)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::recursive_directory_iterator(path)) {
                if (entry.is_regular_file()) found.push_back(entry.path().string());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(path)) {
            files.push_back(p);
        } else {
            throw ParseError("corpus path does not exist: " + p);
        }
    }
    return files;
}

namespace {

bool is_jsonl(const std::string& path) {
    return path.ends_with(".jsonl") || path.ends_with(".ndjson");
}

// uniform integer in [0, bound) from mt19937_64 via rejection; stable across
// platforms, unlike std::uniform_int_distribution
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
    for (;;) {
        std::uint64_t v = rng();
        if (v >= threshold) return v % bound;
    }
}

void stream_file(const std::string& path, const std::string& text_field,
                 const DocumentSink& sink) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open corpus file: " + path);
    }
    std::string line;
    std::size_t line_no = 0;
    const bool jsonl = is_jsonl(path);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (jsonl) {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
            }
            if (!doc.contains(text_field) || !doc[text_field].is_string()) {
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": missing text field \"" + text_field + "\"");
            }
            sink(doc[text_field].get<std::string>());
        } else {
            sink(line);
        }
    }
}

}  // namespace

void for_each_document(const std::vector<std::string>& paths, const CorpusOptions& options,
                       const DocumentSink& sink) {
    std::vector<std::string> files = expand_corpus_paths(paths);
    if (options.sample == 0) {
        for (const std::string& f : files) stream_file(f, options.text_field, sink);
        return;
    }

    // reservoir sampling (algorithm R) with an explicit seed
    std::mt19937_64 rng(options.seed);
    std::vector<std::string> reservoir;
    reservoir.reserve(options.sample);
    std::uint64_t seen = 0;
    for (const std::string& f : files) {
        stream_file(f, options.text_field, [&](std::string_view doc) {
            ++seen;
            if (reservoir.size() < options.sample) {
                reservoir.emplace_back(doc);
            } else {
                std::uint64_t j = bounded(rng, seen);
                if (j < options.sample) reservoir[j] = std::string(doc);
            }
        });
    }
    for (const std::string& doc : reservoir) sink(doc);
}

std::vector<std::string> read_corpus(const std::vector<std::string>& paths,
                                     const CorpusOptions& options) {
    std::vector<std::string> docs;
    for_each_document(paths, options, [&](std::string_view d) { docs.emplace_back(d); });
    return docs;
}

}  // namespace toklite
