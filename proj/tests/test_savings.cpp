#include <doctest.h>

#include "toklite/savings.hpp"
#include "toklite/types.hpp"

using namespace toklite;

namespace {

SavingsInput tied_config() {
    SavingsInput in;
    in.vocab_size = 130000;
    in.hidden_dim = 2000;  // vocab*hidden = 260M = 26% of 1B total
    in.tied_embedding = true;
    in.total_params = 1000000000ull;
    in.sequence_length = 256;
    in.removed_fraction = 0.1;
    return in;
}

}  // namespace

TEST_CASE("zero removal saves nothing") {
    SavingsInput in = tied_config();
    in.removed_fraction = 0.0;
    SavingsReport r = compute_savings(in);
    CHECK(r.param_saved_pct == 0.0);
    CHECK(r.flops_first_saved_pct == 0.0);
    CHECK(r.flops_cache_saved_pct == 0.0);
}

TEST_CASE("tied embedding with a 26% embedding share saves 2.6% params at 10%") {
    // hand arithmetic: 0.1 * 130000 * 2000 / 1e9 = 0.026
    SavingsReport r = compute_savings(tied_config());
    CHECK(r.param_saved_pct == doctest::Approx(2.6).epsilon(1e-9));
}

TEST_CASE("untied embeddings count both matrices") {
    SavingsInput in = tied_config();
    in.tied_embedding = false;
    SavingsReport r = compute_savings(in);
    CHECK(r.param_saved_pct == doctest::Approx(5.2).epsilon(1e-9));
}

TEST_CASE("param saving is linear in the removed fraction") {
    SavingsInput in = tied_config();
    SavingsReport r1 = compute_savings(in);
    in.removed_fraction = 0.2;
    SavingsReport r2 = compute_savings(in);
    CHECK(r2.param_saved_pct == doctest::Approx(2.0 * r1.param_saved_pct));
    CHECK(r2.flops_first_saved_pct == doctest::Approx(2.0 * r1.flops_first_saved_pct));
}

TEST_CASE("flop savings are positive and bounded by the output share") {
    SavingsReport r = compute_savings(tied_config());
    CHECK(r.flops_first_saved_pct > 0.0);
    CHECK(r.flops_cache_saved_pct > 0.0);
    // output projection is 260M of 1B matmul params: saving < 10% of that share
    CHECK(r.flops_first_saved_pct < 2.6);
    CHECK(r.flops_cache_saved_pct < 2.6);
}

TEST_CASE("invalid inputs are rejected") {
    SavingsInput in = tied_config();
    in.total_params = 0;
    CHECK_THROWS_AS(compute_savings(in), IntegrityError);

    in = tied_config();
    in.removed_fraction = 1.5;
    CHECK_THROWS_AS(compute_savings(in), IntegrityError);

    in = tied_config();
    in.vocab_size = 0;
    CHECK_THROWS_AS(compute_savings(in), IntegrityError);

    in = tied_config();
    in.total_params = 1000;  // embedding larger than the model
    CHECK_THROWS_AS(compute_savings(in), IntegrityError);

    std::string formatted = format_savings(tied_config(), compute_savings(tied_config()));
    CHECK(formatted.find("params saved") != std::string::npos);
}
