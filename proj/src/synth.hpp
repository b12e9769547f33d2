#ifndef NETCF_SYNTH_HPP
#define NETCF_SYNTH_HPP

#include <cstdint>

#include "rating_matrix.hpp"

namespace netcf {

/// Parameters of the synthetic rating generator. Defaults approximate the
/// public 100k-rating MovieLens snapshot: ~943 users with a heavy-tailed
/// activity profile (minimum 20 ratings), ~1682 items with Zipf-like
/// popularity, and integer ratings in [1,5] produced by a biased low-rank
/// model plus Gaussian noise.
struct SynthParams {
    std::uint32_t n_users = 943;
    std::uint32_t n_items = 1682;
    std::size_t target_ratings = 100000;
    std::uint64_t seed = 1;

    RatingDomain domain{1, 5};
    double global_mean = 3.53;
    double user_bias_sd = 0.35;
    double item_bias_sd = 0.40;
    std::uint32_t factor_dim = 5;
    double factor_sd = 0.45;
    double noise_sd = 0.90;
    double popularity_exponent = 0.8;
    double activity_log_sd = 1.0;
    /// Strength of the pick-what-you-like selection effect: sampling weight
    /// is popularity * exp(selection_strength * predicted affinity). Zero
    /// makes item choice independent of preferences.
    double selection_strength = 1.0;
};

/// Deterministic synthetic rating matrix; identical parameters and seed give
/// an identical matrix on every platform.
RatingMatrix synthesize_ratings(const SynthParams& p);

} // namespace netcf

#endif
