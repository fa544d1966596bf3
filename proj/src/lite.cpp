#include "toklite/lite.hpp"

#include <algorithm>
#include <fstream>

#include "toklite/model_io.hpp"
#include "toklite/pretokenizer.hpp"

namespace toklite {

const char* to_string(LiteMode m) {
    switch (m) {
        case LiteMode::split_only: return "split_only";
        case LiteMode::split_remerge: return "split_remerge";
        case LiteMode::incremental: return "incremental";
    }
    return "?";
}

LiteTokenizer::LiteTokenizer(TokenizerModel base, std::vector<TokenId> imr)
    : base_(std::move(base)) {
    removed_.assign(base_.size(), false);
    std::sort(imr.begin(), imr.end());
    imr.erase(std::unique(imr.begin(), imr.end()), imr.end());
    for (TokenId t : imr) {
        if (t >= base_.size()) {
            throw IntegrityError("lite: removed id " + std::to_string(t) + " out of range");
        }
        if (base_.is_base(t)) {
            throw IntegrityError("lite: cannot remove base token " + std::to_string(t));
        }
        if (base_.is_special(t)) {
            throw IntegrityError("lite: cannot remove special token " + std::to_string(t));
        }
        removed_[t] = true;
    }
    removed_ids_ = std::move(imr);
}

LiteTokenizer::SplitOut LiteTokenizer::split_spans(const EncodeTrace& trace) const {
    SplitOut out;
    out.ids.reserve(trace.final_ids.size());

    // expand one formation: removed products recurse into the recorded pair
    auto emit = [&](auto&& self, std::int32_t form) -> void {
        const Formation& f = trace.formations[form];
        if (!removed_[f.token]) {
            out.ids.push_back(f.token);
            return;
        }
        // removed tokens are never base/special, so both children exist
        self(self, f.left);
        self(self, f.right);
    };

    for (const auto& [begin, end] : trace.pretoken_spans) {
        std::uint32_t out_begin = static_cast<std::uint32_t>(out.ids.size());
        bool dirty = false;
        for (std::uint32_t i = begin; i < end; ++i) {
            if (removed_[trace.final_ids[i]]) {
                dirty = true;
                emit(emit, trace.final_forms[i]);
            } else {
                out.ids.push_back(trace.final_ids[i]);
            }
        }
        out.spans.emplace_back(out_begin, static_cast<std::uint32_t>(out.ids.size()));
        out.dirty.push_back(dirty);
    }
    return out;
}

std::vector<TokenId> LiteTokenizer::split(const EncodeTrace& trace) const {
    return split_spans(trace).ids;
}

std::vector<TokenId> LiteTokenizer::remerge(
    std::span<const TokenId> ids,
    std::span<const std::pair<std::uint32_t, std::uint32_t>> spans,
    const std::vector<bool>* dirty) const {
    std::vector<TokenId> out;
    out.reserve(ids.size());
    for (std::size_t k = 0; k < spans.size(); ++k) {
        const auto& [begin, end] = spans[k];
        if (dirty && !(*dirty)[k]) {
            out.insert(out.end(), ids.begin() + begin, ids.begin() + end);
            continue;
        }
        std::vector<TokenId> merged =
            resolve_merges(base_, ids.subspan(begin, end - begin), &removed_);
        out.insert(out.end(), merged.begin(), merged.end());
    }
    return out;
}

LiteEncoding LiteTokenizer::encode(std::string_view text, LiteMode mode) const {
    if (mode == LiteMode::incremental) {
        IncrementalEncoder inc(*this);
        std::vector<TokenId> ids = inc.feed(text);
        std::vector<TokenId> tail = inc.finish();
        ids.insert(ids.end(), tail.begin(), tail.end());
        return LiteEncoding{std::move(ids), mode};
    }
    EncodeTrace trace = toklite::encode(base_, text);
    SplitOut split = split_spans(trace);
    if (mode == LiteMode::split_only) {
        return LiteEncoding{std::move(split.ids), mode};
    }
    return LiteEncoding{remerge(split.ids, split.spans, &split.dirty), mode};
}

std::string LiteTokenizer::bitmask() const {
    std::string mask((base_.size() + 7) / 8, '\0');
    for (TokenId t : removed_ids_) {
        mask[t / 8] |= static_cast<char>(1u << (t % 8));
    }
    return mask;
}

void LiteTokenizer::save(std::ostream& out, const std::string& run_config_json) const {
    save_native(out, base_, &removed_ids_, run_config_json);
}

LiteTokenizer LiteTokenizer::load(std::istream& in) {
    NativeFile file = load_native(in);
    return LiteTokenizer(std::move(file.model), std::move(file.imr));
}

LiteTokenizer LiteTokenizer::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open lite tokenizer file: " + path);
    }
    return load(in);
}

std::vector<TokenId> IncrementalEncoder::feed(std::string_view bytes) {
    pending_.append(bytes);
    std::vector<ByteSpan> spans = pretokenize(pending_, lite_.base().pretokenizer());
    // The last pretoken can always grow; the one before it can still change
    // when the last one begins with bytes that later complete a multi-byte
    // character or donate a space. Holding back two is always safe.
    if (spans.size() < 3) return {};
    std::size_t flush_end = spans[spans.size() - 2].first;

    // never cut through a special-token match, including one that could
    // still complete with future bytes
    const auto& specials = lite_.base().specials();
    if (!specials.empty()) {
        for (;;) {
            std::size_t hold = flush_end;
            for (TokenId s : specials) {
                const std::string& pat = lite_.base().bytes(s);
                std::size_t from = flush_end >= pat.size() ? flush_end - pat.size() + 1 : 0;
                for (std::size_t p = from; p < flush_end; ++p) {
                    if (p + pat.size() > flush_end &&
                        pending_.compare(p, pat.size(), pat) == 0) {
                        hold = std::min(hold, p);
                    }
                }
                // a buffer suffix that is a proper prefix of the special
                std::size_t max_k = std::min(pat.size() - 1, pending_.size());
                for (std::size_t k = max_k; k >= 1; --k) {
                    std::size_t start = pending_.size() - k;
                    if (start < flush_end && pending_.compare(start, k, pat, 0, k) == 0) {
                        hold = std::min(hold, start);
                        break;
                    }
                }
            }
            if (hold == flush_end) break;
            flush_end = hold;
        }
        if (flush_end == 0) return {};
    }

    EncodeTrace trace = encode(lite_.base(), std::string_view(pending_).substr(0, flush_end));
    std::vector<TokenId> out = lite_.split(trace);
    pending_.erase(0, flush_end);
    return out;
}

std::vector<TokenId> IncrementalEncoder::finish() {
    if (pending_.empty()) return {};
    EncodeTrace trace = encode(lite_.base(), pending_);
    std::vector<TokenId> out = lite_.split(trace);
    pending_.clear();
    return out;
}

}  // namespace toklite
