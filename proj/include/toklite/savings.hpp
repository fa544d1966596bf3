#pragma once

#include <cstdint>
#include <string>

namespace toklite {

struct SavingsInput {
    std::uint64_t vocab_size = 0;
    double removed_fraction = 0.0;  // in [0, 1]
    std::uint64_t hidden_dim = 0;
    bool tied_embedding = true;
    std::uint64_t total_params = 0;
    std::uint64_t sequence_length = 0;
};

// Accounting (documented, since conventions vary):
//   * embedding params = vocab * hidden, twice when untied
//   * param saving     = removed_fraction * embedding params / total
//   * matmul flops     = 2 flops per non-input-embedding parameter per
//     position; the output projection is always compute even when tied
//   * attention score/value flops use a layer count estimated as
//     body_params / (12 * hidden^2)
//   * "first" = full forward over sequence_length positions without a
//     cache; "cache" = one decode step against sequence_length cached keys
struct SavingsReport {
    double param_saved_pct;
    double flops_first_saved_pct;
    double flops_cache_saved_pct;
    std::uint64_t estimated_layers;
};

// Throws IntegrityError on non-positive dimensions or removed_fraction
// outside [0, 1].
SavingsReport compute_savings(const SavingsInput& input);

std::string format_savings(const SavingsInput& input, const SavingsReport& report);

}  // namespace toklite
