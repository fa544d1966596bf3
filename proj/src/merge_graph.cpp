#include "toklite/merge_graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "toklite/bytes.hpp"

namespace toklite {

MergeGraph MergeGraph::build(const TokenizerModel& model) {
    MergeGraph g;
    g.flavor_ = model.flavor();
    const std::size_t n = model.size();
    g.parents_.resize(n);
    g.children_.resize(n);
    g.memo_->sets.resize(n);

    if (model.flavor() == Flavor::standard) {
        // model validation already ordered merges by rank and rejected cycles
        for (const MergeRule& m : model.merges()) {
            g.parents_[m.result].push_back({m.left, m.right});
        }
        for (TokenId b : model.base_ids()) g.formation_order_.push_back(b);
        for (TokenId s : model.specials()) g.formation_order_.push_back(s);
        for (const MergeRule& m : model.merges()) g.formation_order_.push_back(m.result);
    } else {
        std::vector<TokenId> by_rank(n);
        for (std::size_t i = 0; i < n; ++i) by_rank[i] = static_cast<TokenId>(i);
        std::sort(by_rank.begin(), by_rank.end(), [&](TokenId a, TokenId b) {
            return *model.rank(a) < *model.rank(b);
        });
        g.formation_order_ = by_rank;

        for (std::size_t i = 0; i < n; ++i) {
            TokenId t = static_cast<TokenId>(i);
            if (model.is_base(t) || model.is_special(t)) continue;
            const std::string& bytes = model.bytes(t);
            std::uint32_t rank = *model.rank(t);
            std::string_view sv{bytes};
            for (std::size_t cut = 1; cut < bytes.size(); ++cut) {
                auto l = model.find(sv.substr(0, cut));
                auto r = model.find(sv.substr(cut));
                if (!l || !r) continue;
                if (model.is_special(*l) || model.is_special(*r)) continue;
                // a greedy encoder can only build from already-formed parts
                if (*model.rank(*l) >= rank || *model.rank(*r) >= rank) continue;
                g.parents_[t].push_back({*l, *r});
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (const ParentPair& p : g.parents_[i]) {
            g.children_[p.first].push_back(static_cast<TokenId>(i));
            if (p.second != p.first) g.children_[p.second].push_back(static_cast<TokenId>(i));
        }
    }
    for (auto& ch : g.children_) {
        std::sort(ch.begin(), ch.end());
        ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
    }
    return g;
}

const std::vector<ParentPair>& MergeGraph::parents(TokenId t) const {
    if (t >= parents_.size()) throw IntegrityError("graph: token id out of range");
    return parents_[t];
}

const std::vector<TokenId>& MergeGraph::children(TokenId t) const {
    if (t >= children_.size()) throw IntegrityError("graph: token id out of range");
    return children_[t];
}

ParentPair MergeGraph::split_once(TokenId t, std::optional<ParentPair> used_parent) const {
    const auto& ps = parents(t);
    if (ps.empty()) {
        throw IntegrityError("split: token " + std::to_string(t) + " has no parent pair");
    }
    if (flavor_ == Flavor::standard) {
        return ps.front();
    }
    if (!used_parent) {
        throw IntegrityError("split: rank_greedy split requires the traced parent pair");
    }
    if (std::find(ps.begin(), ps.end(), *used_parent) == ps.end()) {
        throw IntegrityError("split: supplied pair is not a parent of token " +
                             std::to_string(t));
    }
    return *used_parent;
}

DescendantSet MergeGraph::descendants(TokenId t) const {
    if (flavor_ != Flavor::standard) {
        throw IntegrityError("descendants: unsupported on rank_greedy graphs "
                             "(use trace-based counting)");
    }
    if (t >= parents_.size()) throw IntegrityError("graph: token id out of range");
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        if (memo_->sets[t]) return *memo_->sets[t];
    }

    // multiplicity of t inside d's tree: sum over d's parent legs of
    // (leg == t) + multiplicity(t inside leg)
    std::map<TokenId, std::uint64_t> mult;
    std::function<std::uint64_t(TokenId)> occurrences = [&](TokenId d) -> std::uint64_t {
        auto it = mult.find(d);
        if (it != mult.end()) return it->second;
        std::uint64_t m = 0;
        if (!parents_[d].empty()) {
            const auto& [l, r] = parents_[d].front();
            m += (l == t) ? 1 : occurrences(l);
            m += (r == t) ? 1 : occurrences(r);
        }
        mult[d] = m;
        return m;
    };

    // walk upward through children edges collecting reachable tokens
    DescendantSet out{t, {}};
    std::vector<TokenId> stack = children_[t];
    std::vector<bool> visited(parents_.size(), false);
    while (!stack.empty()) {
        TokenId d = stack.back();
        stack.pop_back();
        if (visited[d]) continue;
        visited[d] = true;
        std::uint64_t m = occurrences(d);
        if (m > 0) out.descendants.push_back({d, m});
        for (TokenId c : children_[d]) {
            if (!visited[c]) stack.push_back(c);
        }
    }
    std::sort(out.descendants.begin(), out.descendants.end());

    std::lock_guard<std::mutex> lock(memo_->mutex);
    if (!memo_->sets[t]) memo_->sets[t] = out;
    return out;
}

std::vector<TokenId> MergeGraph::subtree_tokens(TokenId t) const {
    if (flavor_ != Flavor::standard) {
        throw IntegrityError("subtree_tokens: standard flavor only");
    }
    std::vector<TokenId> out;
    std::vector<TokenId> stack;
    for (const ParentPair& p : parents(t)) {
        stack.push_back(p.first);
        stack.push_back(p.second);
    }
    std::vector<bool> seen(parents_.size(), false);
    while (!stack.empty()) {
        TokenId u = stack.back();
        stack.pop_back();
        if (seen[u]) continue;
        seen[u] = true;
        out.push_back(u);
        for (const ParentPair& p : parents_[u]) {
            stack.push_back(p.first);
            stack.push_back(p.second);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

void collect_down(const MergeGraph& graph, TokenId t, std::vector<TokenId>& order,
                  std::vector<bool>& seen) {
    if (seen[t]) return;
    seen[t] = true;
    order.push_back(t);
    for (const ParentPair& p : graph.parents(t)) {
        collect_down(graph, p.first, order, seen);
        collect_down(graph, p.second, order, seen);
    }
}

void collect_up(const MergeGraph& graph, TokenId t, int depth, std::vector<TokenId>& order,
                std::vector<bool>& seen) {
    if (depth <= 0) return;
    for (TokenId c : graph.children(t)) {
        if (!seen[c]) {
            seen[c] = true;
            order.push_back(c);
        }
        collect_up(graph, c, depth - 1, order, seen);
    }
}

}  // namespace

std::string render_merge_tree_dot(const TokenizerModel& model, const MergeGraph& graph,
                                  TokenId t, int up_depth) {
    std::vector<TokenId> order;
    std::vector<bool> seen(graph.size(), false);
    collect_down(graph, t, order, seen);
    collect_up(graph, t, up_depth, order, seen);

    std::ostringstream out;
    out << "digraph merge_tree {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
    for (TokenId u : order) {
        out << "  t" << u << " [label=\"" << dot_escape(display_token(model.bytes(u)))
            << "\\n#" << u << "\"" << (u == t ? ", style=bold" : "") << "];\n";
    }
    for (TokenId u : order) {
        for (const ParentPair& p : graph.parents(u)) {
            if (!seen[p.first] || !seen[p.second]) continue;
            out << "  t" << p.first << " -> t" << u << ";\n";
            out << "  t" << p.second << " -> t" << u << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string render_merge_tree_json(const TokenizerModel& model, const MergeGraph& graph,
                                   TokenId t, int up_depth) {
    std::vector<TokenId> order;
    std::vector<bool> seen(graph.size(), false);
    collect_down(graph, t, order, seen);
    collect_up(graph, t, up_depth, order, seen);

    nlohmann::ordered_json doc;
    doc["root"] = t;
    auto nodes = nlohmann::ordered_json::array();
    for (TokenId u : order) {
        nlohmann::ordered_json node;
        node["id"] = u;
        node["token"] = display_token(model.bytes(u));
        node["bytes_b64"] = base64_encode(model.bytes(u));
        node["base"] = model.is_base(u);
        auto parents = nlohmann::ordered_json::array();
        for (const ParentPair& p : graph.parents(u)) {
            parents.push_back({p.first, p.second});
        }
        node["parents"] = std::move(parents);
        nodes.push_back(std::move(node));
    }
    doc["nodes"] = std::move(nodes);
    return doc.dump(1, '\t');
}

}  // namespace toklite
