#include "toklite/savings.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "toklite/types.hpp"

namespace toklite {

SavingsReport compute_savings(const SavingsInput& input) {
    if (input.total_params == 0) {
        throw IntegrityError("savings: total_params must be positive");
    }
    if (input.vocab_size == 0 || input.hidden_dim == 0 || input.sequence_length == 0) {
        throw IntegrityError("savings: vocab_size, hidden_dim and sequence_length must be positive");
    }
    if (input.removed_fraction < 0.0 || input.removed_fraction > 1.0) {
        throw IntegrityError("savings: removed_fraction must lie in [0, 1]");
    }

    const double vd = static_cast<double>(input.vocab_size) *
                      static_cast<double>(input.hidden_dim);
    const double embed_params = vd * (input.tied_embedding ? 1.0 : 2.0);
    const double total = static_cast<double>(input.total_params);
    if (embed_params > total) {
        throw IntegrityError("savings: embedding parameters exceed total_params");
    }

    const double body = total - embed_params;
    const double d = static_cast<double>(input.hidden_dim);
    const double len = static_cast<double>(input.sequence_length);
    const double layers = std::max(1.0, std::round(body / (12.0 * d * d)));

    // per-position matmul flops; the input embedding is a lookup
    const double matmul_per_pos = 2.0 * (body + vd);
    const double saved_per_pos = input.removed_fraction * 2.0 * vd;

    // full forward: attention over a growing causal window, mean length len/2
    const double attn_first = layers * 4.0 * d * (len / 2.0);
    // cached decode: one position attending to len cached keys
    const double attn_cache = layers * 4.0 * d * len;

    SavingsReport report;
    report.param_saved_pct = 100.0 * input.removed_fraction * embed_params / total;
    report.flops_first_saved_pct = 100.0 * saved_per_pos / (matmul_per_pos + attn_first);
    report.flops_cache_saved_pct = 100.0 * saved_per_pos / (matmul_per_pos + attn_cache);
    report.estimated_layers = static_cast<std::uint64_t>(layers);
    return report;
}

std::string format_savings(const SavingsInput& input, const SavingsReport& report) {
    std::ostringstream out;
    out << "vocab " << input.vocab_size << ", hidden " << input.hidden_dim << ", "
        << (input.tied_embedding ? "tied" : "untied") << " embedding, total params "
        << input.total_params << ", seq len " << input.sequence_length << "\n";
    out << "removed fraction      " << input.removed_fraction << "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "params saved          %.3f%%\n", report.param_saved_pct);
    out << buf;
    std::snprintf(buf, sizeof(buf), "flops saved (first)   %.3f%%\n",
                  report.flops_first_saved_pct);
    out << buf;
    std::snprintf(buf, sizeof(buf), "flops saved (cache)   %.3f%%\n",
                  report.flops_cache_saved_pct);
    out << buf;
    out << "estimated layers      " << report.estimated_layers
        << " (from body params / 12*hidden^2)\n";
    return out.str();
}

}  // namespace toklite
