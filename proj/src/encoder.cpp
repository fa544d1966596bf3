#include "toklite/encoder.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>

#include "toklite/pretokenizer.hpp"

namespace toklite {

namespace {

struct Node {
    TokenId token;
    std::int32_t prev;
    std::int32_t next;
    std::int32_t form;      // formation index (within the trace) or -1
    std::uint32_t byte_off; // start offset inside the working byte buffer
    bool alive;
};

struct Candidate {
    std::uint32_t sort_rank;  // merge order priority
    std::uint32_t byte_off;   // leftmost-first tie break for equal ranks
    std::int32_t left;
    std::int32_t right;

    bool operator>(const Candidate& o) const {
        if (sort_rank != o.sort_rank) return sort_rank > o.sort_rank;
        return byte_off > o.byte_off;
    }
};

// Shared merge loop for both flavors. `bytes` backs rank_greedy pair lookup
// (a pair's concatenation is a contiguous slice). When `trace` is set, every
// unit gets a formation record and merges are linked through it.
class MergeRun {
public:
    MergeRun(const TokenizerModel& model, const std::vector<bool>* removed, EncodeTrace* trace)
        : model_(model), removed_(removed), trace_(trace) {}

    void seed(TokenId token, std::string_view token_bytes) {
        std::int32_t idx = static_cast<std::int32_t>(nodes_.size());
        std::int32_t form = -1;
        if (trace_) {
            form = static_cast<std::int32_t>(trace_->formations.size());
            trace_->formations.push_back(Formation{token, -1, -1, -1, false});
        }
        nodes_.push_back(Node{token, idx - 1, idx + 1,
                              form, static_cast<std::uint32_t>(bytes_.size()), true});
        bytes_.append(token_bytes);
    }

    // runs merges to the fixed point and appends final ids (and spans) to out
    void run(std::vector<TokenId>& out, std::vector<std::int32_t>* out_forms) {
        if (nodes_.empty()) return;
        nodes_.back().next = -1;

        std::priority_queue<Candidate, std::vector<Candidate>, std::greater<Candidate>> heap;
        for (std::int32_t i = 0; i + 1 < static_cast<std::int32_t>(nodes_.size()); ++i) {
            push_candidate(heap, i, i + 1);
        }

        while (!heap.empty()) {
            Candidate c = heap.top();
            heap.pop();
            if (!nodes_[c.left].alive || !nodes_[c.right].alive) continue;
            if (nodes_[c.left].next != c.right) continue;
            merge(heap, c);
        }

        for (std::int32_t i = head(); i != -1; i = nodes_[i].next) {
            out.push_back(nodes_[i].token);
            if (out_forms) out_forms->push_back(nodes_[i].form);
            if (trace_ && nodes_[i].form >= 0) {
                trace_->formations[nodes_[i].form].survived = true;
            }
        }
    }

private:
    std::int32_t head() const {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].alive) {
                std::int32_t j = static_cast<std::int32_t>(i);
                while (nodes_[j].prev != -1 && nodes_[nodes_[j].prev].alive) j = nodes_[j].prev;
                return j;
            }
        }
        return -1;
    }

    void push_candidate(std::priority_queue<Candidate, std::vector<Candidate>,
                                            std::greater<Candidate>>& heap,
                        std::int32_t l, std::int32_t r) {
        const Node& ln = nodes_[l];
        const Node& rn = nodes_[r];
        if (model_.flavor() == Flavor::standard) {
            const MergeRule* rule = model_.rule_for_pair(ln.token, rn.token);
            if (!rule) return;
            if (removed_ && (*removed_)[rule->result]) return;
            heap.push(Candidate{rule->rank, ln.byte_off, l, r});
        } else {
            std::string_view merged = pair_bytes(l, r);
            auto id = model_.find(merged);
            if (!id) return;
            if (removed_ && (*removed_)[*id]) return;
            if (model_.is_special(*id)) return;
            heap.push(Candidate{*model_.rank(*id), ln.byte_off, l, r});
        }
    }

    std::string_view pair_bytes(std::int32_t l, std::int32_t r) const {
        const Node& ln = nodes_[l];
        const Node& rn = nodes_[r];
        std::size_t begin = ln.byte_off;
        std::size_t end = rn.byte_off + model_.bytes(rn.token).size();
        return std::string_view(bytes_).substr(begin, end - begin);
    }

    void merge(std::priority_queue<Candidate, std::vector<Candidate>,
                                   std::greater<Candidate>>& heap,
               const Candidate& c) {
        TokenId result;
        std::int32_t rule_rank;
        if (model_.flavor() == Flavor::standard) {
            const MergeRule* rule = model_.rule_for_pair(nodes_[c.left].token,
                                                         nodes_[c.right].token);
            result = rule->result;
            rule_rank = static_cast<std::int32_t>(rule->rank);
        } else {
            result = *model_.find(pair_bytes(c.left, c.right));
            rule_rank = static_cast<std::int32_t>(*model_.rank(result));
        }

        std::int32_t form = -1;
        if (trace_) {
            form = static_cast<std::int32_t>(trace_->formations.size());
            trace_->formations.push_back(
                Formation{result, rule_rank, nodes_[c.left].form, nodes_[c.right].form, false});
        }

        // copy link fields first: push_back may reallocate nodes_
        const std::int32_t prev = nodes_[c.left].prev;
        const std::int32_t next = nodes_[c.right].next;
        const std::uint32_t off = nodes_[c.left].byte_off;
        const std::int32_t idx = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(Node{result, prev, next, form, off, true});
        nodes_[c.left].alive = false;
        nodes_[c.right].alive = false;
        if (prev != -1) nodes_[prev].next = idx;
        if (next != -1) nodes_[next].prev = idx;

        if (prev != -1) push_candidate(heap, prev, idx);
        if (next != -1) push_candidate(heap, idx, next);
    }

    const TokenizerModel& model_;
    const std::vector<bool>* removed_;
    EncodeTrace* trace_;
    std::vector<Node> nodes_;
    std::string bytes_;
};

// splits text around special-token occurrences (leftmost, then longest)
struct Segment {
    std::string_view text;
    TokenId special;  // kNoToken for plain segments
};

std::vector<Segment> split_specials(const TokenizerModel& model, std::string_view text) {
    std::vector<Segment> segments;
    if (model.specials().empty() || text.empty()) {
        if (!text.empty()) segments.push_back(Segment{text, kNoToken});
        return segments;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t best_at = std::string_view::npos;
        std::size_t best_len = 0;
        TokenId best_id = kNoToken;
        for (TokenId s : model.specials()) {
            const std::string& pat = model.bytes(s);
            std::size_t at = text.find(pat, pos);
            if (at == std::string_view::npos) continue;
            if (at < best_at || (at == best_at && pat.size() > best_len)) {
                best_at = at;
                best_len = pat.size();
                best_id = s;
            }
        }
        if (best_at == std::string_view::npos) {
            segments.push_back(Segment{text.substr(pos), kNoToken});
            break;
        }
        if (best_at > pos) {
            segments.push_back(Segment{text.substr(pos, best_at - pos), kNoToken});
        }
        segments.push_back(Segment{text.substr(best_at, best_len), best_id});
        pos = best_at + best_len;
    }
    return segments;
}

void encode_pretoken(const TokenizerModel& model, std::string_view pretoken, EncodeTrace& trace) {
    MergeRun run(model, nullptr, &trace);
    for (std::size_t i = 0; i < pretoken.size(); ++i) {
        std::string_view unit = pretoken.substr(i, 1);
        auto id = model.find(unit);
        if (!id) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "encode: no base token for byte 0x%02X",
                          static_cast<unsigned char>(pretoken[i]));
            throw IntegrityError(buf);
        }
        run.seed(*id, unit);
    }
    run.run(trace.final_ids, &trace.final_forms);
}

}  // namespace

EncodeTrace encode(const TokenizerModel& model, std::string_view text) {
    EncodeTrace trace;
    for (const Segment& seg : split_specials(model, text)) {
        if (seg.special != kNoToken) {
            std::uint32_t begin = static_cast<std::uint32_t>(trace.final_ids.size());
            std::int32_t form = static_cast<std::int32_t>(trace.formations.size());
            trace.formations.push_back(Formation{seg.special, -1, -1, -1, true});
            trace.final_ids.push_back(seg.special);
            trace.final_forms.push_back(form);
            trace.pretoken_spans.emplace_back(begin, begin + 1);
            continue;
        }
        for (ByteSpan span : pretokenize(seg.text, model.pretokenizer())) {
            std::uint32_t begin = static_cast<std::uint32_t>(trace.final_ids.size());
            encode_pretoken(model, seg.text.substr(span.first, span.second - span.first), trace);
            std::uint32_t end = static_cast<std::uint32_t>(trace.final_ids.size());
            if (end > begin) trace.pretoken_spans.emplace_back(begin, end);
        }
    }
    return trace;
}

std::string decode(const TokenizerModel& model, std::span<const TokenId> ids) {
    std::string out;
    for (TokenId id : ids) {
        out += model.bytes(id);  // throws on out-of-range
    }
    return out;
}

std::vector<TokenId> resolve_merges(const TokenizerModel& model, std::span<const TokenId> seq,
                                    const std::vector<bool>* removed) {
    MergeRun run(model, removed, nullptr);
    for (TokenId id : seq) {
        run.seed(id, model.bytes(id));
    }
    std::vector<TokenId> out;
    run.run(out, nullptr);
    return out;
}

}  // namespace toklite
