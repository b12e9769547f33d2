#include "synth.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace netcf {

RatingMatrix synthesize_ratings(const SynthParams& p) {
    Rng rng(p.seed);

    std::vector<double> user_bias(p.n_users), item_bias(p.n_items);
    for (auto& b : user_bias) b = rng.gaussian() * p.user_bias_sd;
    for (auto& b : item_bias) b = rng.gaussian() * p.item_bias_sd;

    std::vector<double> user_factors(static_cast<std::size_t>(p.n_users) * p.factor_dim);
    std::vector<double> item_factors(static_cast<std::size_t>(p.n_items) * p.factor_dim);
    double comp_sd = p.factor_sd / std::sqrt(static_cast<double>(p.factor_dim));
    for (auto& f : user_factors) f = rng.gaussian() * comp_sd;
    for (auto& f : item_factors) f = rng.gaussian() * comp_sd;

    // Heavy-tailed per-user activity, scaled so the total lands on target.
    std::vector<double> raw_activity(p.n_users);
    for (auto& a : raw_activity) a = std::exp(rng.gaussian() * p.activity_log_sd);
    std::vector<std::uint32_t> activity(p.n_users);
    const std::uint32_t floor_count = 20;
    double lo_scale = 0.0, hi_scale = 1e7;
    for (int pass = 0; pass < 60; ++pass) {
        double scale = (lo_scale + hi_scale) / 2.0;
        std::size_t total = 0;
        for (std::uint32_t u = 0; u < p.n_users; ++u) {
            auto c = static_cast<std::uint32_t>(floor_count + raw_activity[u] * scale);
            total += std::min(c, p.n_items);
        }
        (total < p.target_ratings ? lo_scale : hi_scale) = scale;
    }
    for (std::uint32_t u = 0; u < p.n_users; ++u)
        activity[u] =
            std::min(static_cast<std::uint32_t>(floor_count + raw_activity[u] * hi_scale),
                     p.n_items);

    // Zipf-like item popularity; low indices are the blockbusters.
    std::vector<double> weight(p.n_items);
    for (std::uint32_t i = 0; i < p.n_items; ++i)
        weight[i] = 1.0 / std::pow(static_cast<double>(i) + 3.0, p.popularity_exponent);

    std::vector<RatingTriple> triples;
    std::vector<std::pair<double, std::uint32_t>> keys(p.n_items);
    for (std::uint32_t u = 0; u < p.n_users; ++u) {
        // Weighted sampling without replacement (Efraimidis-Spirakis keys).
        // Users gravitate toward items they expect to like, so co-rating
        // patterns carry preference structure, not just popularity.
        const double* pu = user_factors.data() + static_cast<std::size_t>(u) * p.factor_dim;
        for (std::uint32_t i = 0; i < p.n_items; ++i) {
            const double* qi = item_factors.data() + static_cast<std::size_t>(i) * p.factor_dim;
            double affinity = item_bias[i];
            for (std::uint32_t d = 0; d < p.factor_dim; ++d) affinity += pu[d] * qi[d];
            double w = weight[i] * std::exp(p.selection_strength * affinity);
            double unit = rng.unit();
            keys[i] = {std::pow(unit, 1.0 / w), i};
        }
        std::uint32_t take = activity[u];
        std::nth_element(keys.begin(), keys.begin() + take, keys.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<std::uint32_t> chosen(take);
        for (std::uint32_t k = 0; k < take; ++k) chosen[k] = keys[k].second;
        std::sort(chosen.begin(), chosen.end());

        for (auto i : chosen) {
            double dot = 0;
            const double* pu = user_factors.data() + static_cast<std::size_t>(u) * p.factor_dim;
            const double* qi = item_factors.data() + static_cast<std::size_t>(i) * p.factor_dim;
            for (std::uint32_t d = 0; d < p.factor_dim; ++d) dot += pu[d] * qi[d];
            double v = p.global_mean + user_bias[u] + item_bias[i] + dot +
                       rng.gaussian() * p.noise_sd;
            double r = std::round(v);
            r = std::min(static_cast<double>(p.domain.hi),
                         std::max(static_cast<double>(p.domain.lo), r));
            triples.push_back({u, i, r});
        }
    }

    return RatingMatrix::from_triples(p.n_users, p.n_items, triples, p.domain);
}

} // namespace netcf
