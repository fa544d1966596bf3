#include "toklite/residue.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "toklite/bytes.hpp"

namespace toklite {

const char* to_string(TokenCategory c) {
    switch (c) {
        case TokenCategory::residue: return "residue";
        case TokenCategory::kept_low_ratio: return "kept_low_ratio";
        case TokenCategory::frequent: return "frequent";
        case TokenCategory::unobserved: return "unobserved";
        case TokenCategory::excluded: return "excluded";
    }
    return "?";
}

std::optional<double> fi_ratio(const CorpusStats& stats, TokenId t) {
    if (t >= stats.f1.size()) {
        throw IntegrityError("fi_ratio: token id out of range");
    }
    std::uint64_t f1 = stats.f1[t];
    std::uint64_t f2 = stats.f2[t];
    if (f1 + f2 == 0) return std::nullopt;
    return static_cast<double>(f1) / static_cast<double>(f1 + f2);
}

ResidueReport classify(const CorpusStats& stats, const TokenizerModel& model,
                       const Thresholds& thresholds) {
    if (stats.model_hash != model.content_hash()) {
        throw IntegrityError("classify: stats were built from model " + stats.model_hash +
                             ", not " + model.content_hash());
    }

    ResidueReport report;
    report.model_hash = model.content_hash();
    report.thresholds = thresholds;

    EntropyTable entropies = compute_entropies(stats, model.size());

    report.tokens.reserve(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        TokenId t = static_cast<TokenId>(i);
        TokenRecord rec;
        rec.id = t;
        rec.f1 = stats.f1[t];
        rec.f2 = stats.f2[t];
        rec.ratio = fi_ratio(stats, t);
        rec.s_left = entropies.s_left[t];
        rec.s_right = entropies.s_right[t];
        rec.score = std::min(rec.s_left, rec.s_right);
        rec.ascii_only = is_ascii(model.bytes(t));

        bool eligible = !model.is_base(t) && !model.is_special(t) && rec.ascii_only;
        if (eligible) report.ascii_vocab += 1;

        if (!eligible) {
            rec.category = TokenCategory::excluded;
        } else if (!rec.ratio) {
            rec.category = TokenCategory::unobserved;
        } else if (*rec.ratio > thresholds.ratio) {
            rec.category = TokenCategory::frequent;
        } else if (rec.score > thresholds.entropy) {
            rec.category = TokenCategory::kept_low_ratio;
            report.low_ratio_count += 1;
        } else {
            rec.category = TokenCategory::residue;
            report.low_ratio_count += 1;
            report.imr.push_back(t);
        }
        report.tokens.push_back(rec);
    }
    return report;
}

std::vector<SweepRow> sweep(const CorpusStats& stats, const TokenizerModel& model,
                            const std::vector<double>& ratio_grid,
                            const std::vector<double>& entropy_grid) {
    if (ratio_grid.empty() || entropy_grid.empty()) {
        throw IntegrityError("sweep: empty threshold grid");
    }
    if (stats.model_hash != model.content_hash()) {
        throw IntegrityError("sweep: stats/model hash mismatch");
    }

    // score every eligible observed token once, then count per grid point
    EntropyTable entropies = compute_entropies(stats, model.size());
    std::vector<std::pair<double, double>> scored;  // (ratio, score)
    std::uint64_t ascii_vocab = 0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        TokenId t = static_cast<TokenId>(i);
        if (model.is_base(t) || model.is_special(t) || !is_ascii(model.bytes(t))) continue;
        ascii_vocab += 1;
        auto r = fi_ratio(stats, t);
        if (!r) continue;
        scored.push_back({*r, std::min(entropies.s_left[t], entropies.s_right[t])});
    }

    std::vector<SweepRow> rows;
    rows.reserve(ratio_grid.size() * entropy_grid.size());
    for (double r : ratio_grid) {
        for (double s : entropy_grid) {
            std::uint64_t count = 0;
            for (const auto& [ratio, score] : scored) {
                if (ratio <= r && score <= s) ++count;
            }
            double pct = ascii_vocab == 0
                             ? 0.0
                             : 100.0 * static_cast<double>(count) / static_cast<double>(ascii_vocab);
            rows.push_back(SweepRow{r, s, count, pct});
        }
    }
    return rows;
}

void write_report_jsonl(std::ostream& out, const ResidueReport& report,
                        const TokenizerModel& model) {
    for (const TokenRecord& rec : report.tokens) {
        nlohmann::ordered_json line;
        line["id"] = rec.id;
        line["token"] = display_token(model.bytes(rec.id));
        line["bytes_b64"] = base64_encode(model.bytes(rec.id));
        line["f1"] = rec.f1;
        line["f2"] = rec.f2;
        if (rec.ratio) {
            line["ratio"] = *rec.ratio;
        } else {
            line["ratio"] = nullptr;
        }
        line["s_left"] = rec.s_left;
        line["s_right"] = rec.s_right;
        line["score"] = rec.score;
        line["ascii_only"] = rec.ascii_only;
        line["category"] = to_string(rec.category);
        out << line.dump() << "\n";
    }
}

std::string format_summary(const ResidueReport& report, const TokenizerModel& model) {
    auto pct = [&](std::uint64_t count) {
        if (report.ascii_vocab == 0) return 0.0;
        return 100.0 * static_cast<double>(count) / static_cast<double>(report.ascii_vocab);
    };
    std::ostringstream out;
    out << "model hash        " << report.model_hash << "\n";
    out << "flavor            " << to_string(model.flavor()) << "\n";
    out << "thresholds        ratio <= " << report.thresholds.ratio << ", entropy <= "
        << report.thresholds.entropy << " nats\n";
    out << "vocab size        " << model.size() << "\n";
    out << "eligible vocab    " << report.ascii_vocab << " (non-base, non-special, ASCII)\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "scrap w/o entropy %llu (%.2f%%)\n",
                  static_cast<unsigned long long>(report.low_ratio_count),
                  pct(report.low_ratio_count));
    out << buf;
    std::snprintf(buf, sizeof(buf), "scrap w/ entropy  %llu (%.2f%%)\n",
                  static_cast<unsigned long long>(report.imr.size()), pct(report.imr.size()));
    out << buf;
    return out.str();
}

}  // namespace toklite
