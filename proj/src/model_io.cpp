#include "toklite/model_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "toklite/bytes.hpp"

namespace toklite {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// applies the byte-level decoding policy to every raw vocab string
std::vector<std::string> decode_vocab_strings(std::vector<std::string> raw,
                                              ByteLevelVocab policy) {
    if (policy == ByteLevelVocab::no) return raw;
    std::vector<std::string> decoded(raw.size());
    bool all_ok = true;
    bool any_remapped = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto d = gpt2_printable_to_bytes(raw[i]);
        if (!d) {
            all_ok = false;
            break;
        }
        if (*d != raw[i]) any_remapped = true;
        decoded[i] = std::move(*d);
    }
    if (policy == ByteLevelVocab::yes) {
        if (!all_ok) {
            throw IntegrityError("vocab: byte-level decoding requested but a token "
                                 "contains codepoints outside the byte alphabet");
        }
        return decoded;
    }
    if (all_ok && any_remapped) return decoded;
    return raw;
}

TokenId resolve_token(const std::unordered_map<std::string, TokenId>& index,
                      const std::string& bytes, std::size_t line_no, const char* what) {
    auto it = index.find(bytes);
    if (it == index.end()) {
        throw IntegrityError(std::string("merges line ") + std::to_string(line_no) + ": " +
                             what + " token not in vocabulary: \"" + display_token(bytes) +
                             "\"");
    }
    return it->second;
}

std::vector<TokenId> match_specials(const std::vector<std::string>& vocab,
                                    const std::vector<std::string>& names) {
    std::vector<TokenId> specials;
    for (const std::string& name : names) {
        auto it = std::find(vocab.begin(), vocab.end(), name);
        if (it == vocab.end()) {
            throw IntegrityError("special token not in vocabulary: " + name);
        }
        specials.push_back(static_cast<TokenId>(it - vocab.begin()));
    }
    return specials;
}

}  // namespace

TokenizerModel load_hf(std::istream& vocab_json, std::istream& merges_txt,
                       const LoadOptions& options) {
    json v;
    try {
        vocab_json >> v;
    } catch (const json::exception& e) {
        throw ParseError(std::string("vocab.json: ") + e.what());
    }
    if (!v.is_object()) {
        throw ParseError("vocab.json: expected an object mapping token to id");
    }

    std::vector<std::string> raw(v.size());
    std::vector<bool> seen(v.size(), false);
    for (auto it = v.begin(); it != v.end(); ++it) {
        if (!it.value().is_number_unsigned()) {
            throw ParseError("vocab.json: id for \"" + it.key() + "\" is not a non-negative integer");
        }
        std::uint64_t id = it.value().get<std::uint64_t>();
        if (id >= raw.size()) {
            throw IntegrityError("vocab.json: ids are not dense (id " + std::to_string(id) +
                                 " with vocab size " + std::to_string(raw.size()) + ")");
        }
        if (seen[id]) {
            throw IntegrityError("vocab.json: duplicate id " + std::to_string(id));
        }
        seen[id] = true;
        raw[id] = it.key();
    }

    std::vector<std::string> vocab = decode_vocab_strings(raw, options.byte_level);
    const bool decoded = vocab != raw;

    std::unordered_map<std::string, TokenId> index;
    index.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) index.emplace(raw[i], static_cast<TokenId>(i));

    std::vector<MergeRule> merges;
    std::string line;
    std::size_t line_no = 0;
    std::uint32_t rank = 0;
    while (std::getline(merges_txt, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line[0] == '#') continue;  // "#version: ..." header
        std::size_t space = line.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 >= line.size() ||
            line.find(' ', space + 1) != std::string::npos) {
            throw ParseError("merges line " + std::to_string(line_no) +
                             ": expected exactly two space-separated tokens");
        }
        std::string left = line.substr(0, space);
        std::string right = line.substr(space + 1);
        TokenId l = resolve_token(index, left, line_no, "left");
        TokenId r = resolve_token(index, right, line_no, "right");
        TokenId result = resolve_token(index, left + right, line_no, "result");
        merges.push_back(MergeRule{rank++, l, r, result});
    }

    TokenizerModel::Init init;
    init.vocab = std::move(vocab);
    init.merges = std::move(merges);
    init.flavor = Flavor::standard;
    init.pretokenizer = options.pretokenizer;
    init.specials = match_specials(init.vocab, [&] {
        // special names arrive in display form; decode alongside the vocab
        if (!decoded) return options.special_tokens;
        std::vector<std::string> names;
        for (const auto& s : options.special_tokens) {
            auto d = gpt2_printable_to_bytes(s);
            names.push_back(d ? *d : s);
        }
        return names;
    }());
    return TokenizerModel(std::move(init));
}

TokenizerModel load_tiktoken(std::istream& ranks_in, const LoadOptions& options) {
    std::vector<std::pair<std::string, std::uint32_t>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ranks_in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t space = line.find(' ');
        if (space == std::string::npos) {
            throw ParseError("rank file line " + std::to_string(line_no) +
                             ": expected \"<base64> <rank>\"");
        }
        std::string bytes;
        try {
            bytes = base64_decode(line.substr(0, space));
        } catch (const ParseError& e) {
            throw ParseError("rank file line " + std::to_string(line_no) + ": " + e.what());
        }
        std::uint32_t rank;
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(line.substr(space + 1), &used);
            if (space + 1 + used != line.size()) throw std::invalid_argument("trailing");
            rank = static_cast<std::uint32_t>(v);
        } catch (const std::exception&) {
            throw ParseError("rank file line " + std::to_string(line_no) + ": bad rank");
        }
        entries.emplace_back(std::move(bytes), rank);
    }

    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].second == entries[i - 1].second) {
            throw IntegrityError("rank file: duplicate rank " + std::to_string(entries[i].second));
        }
    }

    std::uint32_t next_rank = entries.empty() ? 0 : entries.back().second + 1;
    for (const std::string& s : options.special_tokens) {
        bool present = false;
        for (const auto& [bytes, rank] : entries) present |= bytes == s;
        if (!present) entries.emplace_back(s, next_rank++);
    }

    TokenizerModel::Init init;
    init.flavor = Flavor::rank_greedy;
    init.pretokenizer = options.pretokenizer;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        init.vocab.push_back(entries[i].first);
        init.ranks.push_back(entries[i].second);
        if (std::find(options.special_tokens.begin(), options.special_tokens.end(),
                      entries[i].first) != options.special_tokens.end()) {
            init.specials.push_back(static_cast<TokenId>(i));
        }
    }

    // every byte occurring in a regular token needs its single-byte token,
    // or splits (and encoding) would dead-end above that byte
    std::vector<bool> byte_seen(256, false);
    for (const auto& [bytes, rank] : entries) {
        if (bytes.size() == 1) byte_seen[static_cast<unsigned char>(bytes[0])] = true;
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (std::find(init.specials.begin(), init.specials.end(), static_cast<TokenId>(i)) !=
            init.specials.end()) {
            continue;
        }
        for (unsigned char c : entries[i].first) {
            if (!byte_seen[c]) {
                char buf[64];
                std::snprintf(buf, sizeof(buf),
                              "rank file: missing single-byte token for byte 0x%02X", c);
                throw IntegrityError(buf);
            }
        }
    }

    return TokenizerModel(std::move(init));
}

void save_native(std::ostream& out, const TokenizerModel& model,
                 const std::vector<TokenId>* imr, const std::string& run_config_json) {
    ordered_json doc;
    doc["format"] = imr ? "toklite.lite" : "toklite.model";
    doc["version"] = 1;
    doc["flavor"] = to_string(model.flavor());
    doc["pretokenizer"] = {{"mode", to_string(model.pretokenizer().mode)}};
    ordered_json vocab = ordered_json::array();
    for (std::size_t i = 0; i < model.size(); ++i) {
        vocab.push_back(base64_encode(model.bytes(static_cast<TokenId>(i))));
    }
    doc["vocab_b64"] = std::move(vocab);
    if (model.flavor() == Flavor::standard) {
        ordered_json merges = ordered_json::array();
        for (const MergeRule& m : model.merges()) {
            merges.push_back({m.rank, m.left, m.right, m.result});
        }
        doc["merges"] = std::move(merges);
    } else {
        ordered_json ranks = ordered_json::array();
        for (std::size_t i = 0; i < model.size(); ++i) {
            ranks.push_back(*model.rank(static_cast<TokenId>(i)));
        }
        doc["ranks"] = std::move(ranks);
    }
    doc["specials"] = model.specials();
    doc["model_hash"] = model.content_hash();
    if (imr) {
        std::vector<TokenId> sorted = *imr;
        std::sort(sorted.begin(), sorted.end());
        doc["imr"] = sorted;
    }
    if (!run_config_json.empty()) {
        doc["run_config"] = json::parse(run_config_json);
    }
    out << doc.dump(1, '\t') << "\n";
}

NativeFile load_native(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
    try {
        std::string format = doc.at("format").get<std::string>();
        if (format != "toklite.model" && format != "toklite.lite") {
            throw ParseError("model file: unknown format \"" + format + "\"");
        }
        if (doc.at("version").get<int>() != 1) {
            throw ParseError("model file: unsupported version");
        }
        TokenizerModel::Init init;
        init.flavor = flavor_from_string(doc.at("flavor").get<std::string>());
        init.pretokenizer.mode =
            pretokenizer_mode_from_string(doc.at("pretokenizer").at("mode").get<std::string>());
        for (const auto& t : doc.at("vocab_b64")) {
            init.vocab.push_back(base64_decode(t.get<std::string>()));
        }
        if (init.flavor == Flavor::standard) {
            for (const auto& m : doc.at("merges")) {
                init.merges.push_back(MergeRule{m.at(0).get<std::uint32_t>(),
                                                m.at(1).get<TokenId>(), m.at(2).get<TokenId>(),
                                                m.at(3).get<TokenId>()});
            }
        } else {
            init.ranks = doc.at("ranks").get<std::vector<std::uint32_t>>();
        }
        init.specials = doc.at("specials").get<std::vector<TokenId>>();
        NativeFile file{TokenizerModel(std::move(init)), {}};
        if (doc.contains("imr")) {
            file.imr = doc["imr"].get<std::vector<TokenId>>();
        }
        std::string expect = doc.at("model_hash").get<std::string>();
        if (expect != file.model.content_hash()) {
            throw IntegrityError("model file: stored hash " + expect +
                                 " does not match content hash " + file.model.content_hash());
        }
        return file;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
}

NativeFile load_native_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open model file: " + path);
    }
    return load_native(in);
}

TokenizerModel load_model_file(const std::string& path) {
    return std::move(load_native_file(path).model);
}

}  // namespace toklite
