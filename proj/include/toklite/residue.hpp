#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toklite/corpus_stats.hpp"
#include "toklite/model.hpp"

namespace toklite {

// residue         R <= r and S <= s, eligible and observed: removable
// kept_low_ratio  R <= r but S > s: roots, affixes and standalone words
// frequent        R > r
// unobserved      never seen, finally or as an intermediate
// excluded        base, special or non-ASCII: never removable
enum class TokenCategory { residue, kept_low_ratio, frequent, unobserved, excluded };

const char* to_string(TokenCategory c);

struct Thresholds {
    double ratio;    // r
    double entropy;  // s, in nats
};

struct TokenRecord {
    TokenId id;
    std::uint64_t f1;
    std::uint64_t f2;
    std::optional<double> ratio;  // unset when f1 + f2 == 0
    double s_left;
    double s_right;
    double score;  // min(s_left, s_right)
    bool ascii_only;
    TokenCategory category;
};

struct ResidueReport {
    std::string model_hash;
    Thresholds thresholds;
    std::uint64_t ascii_vocab = 0;      // eligible-alphabet vocabulary size
    std::uint64_t low_ratio_count = 0;  // R <= r among eligible observed (no entropy filter)
    std::vector<TokenRecord> tokens;    // one per vocab id
    std::vector<TokenId> imr;           // sorted
};

// R = F1 / (F1 + F2); unset when the token was never observed.
std::optional<double> fi_ratio(const CorpusStats& stats, TokenId t);

// Scores and categorizes every token. Throws IntegrityError when the stats
// were built from a different model.
ResidueReport classify(const CorpusStats& stats, const TokenizerModel& model,
                       const Thresholds& thresholds);

struct SweepRow {
    double ratio;
    double entropy;
    std::uint64_t imr_count;
    double ascii_vocab_pct;
};

// One row per (r, s) grid point; |IMR| is monotone along both axes.
std::vector<SweepRow> sweep(const CorpusStats& stats, const TokenizerModel& model,
                            const std::vector<double>& ratio_grid,
                            const std::vector<double>& entropy_grid);

// report as JSON lines, one token per line
void write_report_jsonl(std::ostream& out, const ResidueReport& report,
                        const TokenizerModel& model);

// counts-and-percentages summary table with and without the entropy filter
std::string format_summary(const ResidueReport& report, const TokenizerModel& model);

}  // namespace toklite
