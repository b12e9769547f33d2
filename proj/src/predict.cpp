#include "predict.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace netcf {

const char* method_name(Method m) {
    switch (m) {
        case Method::user: return "user";
        case Method::item: return "item";
        case Method::hb1: return "hb1";
        case Method::hb2: return "hb2";
    }
    return "?";
}

Method parse_method_name(const std::string& name) {
    if (name == "user") return Method::user;
    if (name == "item") return Method::item;
    if (name == "hb1") return Method::hb1;
    if (name == "hb2") return Method::hb2;
    throw DomainError("unknown method '" + name + "' (expected user, item, hb1 or hb2)");
}

TrainContext::TrainContext(const RatingMatrix& train) : train_(&train) {
    global_mean_ = train.global_mean();
    user_mean_.resize(train.n_users());
    item_mean_.resize(train.n_items());
    for (std::uint32_t u = 0; u < train.n_users(); ++u)
        user_mean_[u] = train.entity_mean(Axis::user, u).value_or(global_mean_);
    for (std::uint32_t i = 0; i < train.n_items(); ++i)
        item_mean_[i] = train.entity_mean(Axis::item, i).value_or(global_mean_);
}

std::vector<ScoredIndex> select_neighbors(const SimilarityMatrix& s, std::uint32_t anchor,
                                          std::span<const std::uint32_t> candidates,
                                          std::uint32_t k) {
    std::vector<ScoredIndex> scored;
    scored.reserve(candidates.size());
    for (auto c : candidates) {
        if (c == anchor) continue;
        if (auto v = s.get(anchor, c)) scored.push_back({c, *v});
    }
    auto better = [](const ScoredIndex& a, const ScoredIndex& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.index < b.index;
    };
    if (scored.size() > k) {
        std::nth_element(scored.begin(), scored.begin() + k, scored.end(), better);
        scored.resize(k);
    }
    std::sort(scored.begin(), scored.end(), better);
    return scored;
}

namespace {

double clamp_to_domain(double v, RatingDomain d) {
    return std::min(static_cast<double>(d.hi), std::max(static_cast<double>(d.lo), v));
}

Prediction finish(double raw, const TrainContext& ctx, const PredictorSpec& spec) {
    Prediction p;
    p.raw = raw;
    p.value = spec.clamp ? clamp_to_domain(raw, ctx.train().domain()) : raw;
    return p;
}

Prediction fallback_prediction(double mean_value, const TrainContext& ctx,
                               const PredictorSpec& spec) {
    if (spec.fallback == Fallback::skip) {
        Prediction p;
        p.abstained = true;
        return p;
    }
    Prediction p = finish(mean_value, ctx, spec);
    p.used_fallback = true;
    return p;
}

std::vector<std::uint32_t> rater_indices(const RatingMatrix& m, std::uint32_t i,
                                         std::uint32_t exclude_user) {
    std::vector<std::uint32_t> out;
    out.reserve(m.item_ratings(i).size());
    for (const auto& r : m.item_ratings(i))
        if (r.index != exclude_user) out.push_back(r.index);
    return out;
}

} // namespace

Prediction predict_user_based(const TrainContext& ctx, const SimilarityMatrix& user_sim,
                              std::uint32_t u, std::uint32_t i, const PredictorSpec& spec) {
    const auto& train = ctx.train();
    if (!ctx.user_has_ratings(u) && spec.fallback == Fallback::skip) {
        Prediction p;
        p.abstained = true;
        return p;
    }

    auto raters = rater_indices(train, i, u);
    auto neighbors = select_neighbors(user_sim, u, raters, spec.k);

    double num = 0, den = 0;
    for (const auto& nb : neighbors) {
        double r_ki = *train.rating(nb.index, i);
        num += nb.score * (r_ki - ctx.user_mean(nb.index));
        den += std::fabs(nb.score);
    }
    if (neighbors.empty() || den == 0.0) return fallback_prediction(ctx.user_mean(u), ctx, spec);

    Prediction p = finish(ctx.user_mean(u) + num / den, ctx, spec);
    p.neighbors_used = static_cast<std::uint32_t>(neighbors.size());
    return p;
}

Prediction predict_item_based(const TrainContext& ctx, const SimilarityMatrix& item_sim,
                              std::uint32_t u, std::uint32_t i, const PredictorSpec& spec) {
    const auto& train = ctx.train();
    if (!ctx.item_has_ratings(i) && spec.fallback == Fallback::skip) {
        Prediction p;
        p.abstained = true;
        return p;
    }

    std::vector<std::uint32_t> rated;
    rated.reserve(train.user_ratings(u).size());
    for (const auto& r : train.user_ratings(u))
        if (r.index != i) rated.push_back(r.index);
    auto neighbors = select_neighbors(item_sim, i, rated, spec.k);

    double num = 0, den = 0;
    for (const auto& nb : neighbors) {
        double r_uk = *train.rating(u, nb.index);
        if (spec.item_baseline == ItemBaseline::deviation)
            num += nb.score * (r_uk - ctx.item_mean(nb.index));
        else
            num += nb.score * r_uk;
        den += std::fabs(nb.score);
    }
    if (neighbors.empty() || den == 0.0) return fallback_prediction(ctx.item_mean(i), ctx, spec);

    double raw = spec.item_baseline == ItemBaseline::deviation ? ctx.item_mean(i) + num / den
                                                               : num / den;
    Prediction p = finish(raw, ctx, spec);
    p.neighbors_used = static_cast<std::uint32_t>(neighbors.size());
    return p;
}

double intermediate_rating(const TrainContext& ctx, const SimilarityMatrix& item_sim,
                           std::uint32_t user_k, std::uint32_t i, std::uint32_t k_items) {
    const auto& train = ctx.train();
    std::vector<std::uint32_t> rated;
    rated.reserve(train.user_ratings(user_k).size());
    for (const auto& r : train.user_ratings(user_k))
        if (r.index != i) rated.push_back(r.index);
    auto neighbors = select_neighbors(item_sim, i, rated, k_items);

    double num = 0, den = 0;
    for (const auto& nb : neighbors) {
        double r_kj = *train.rating(user_k, nb.index);
        num += nb.score * (r_kj - ctx.item_mean(nb.index));
        den += std::fabs(nb.score);
    }
    if (neighbors.empty() || den == 0.0) return ctx.item_mean(i);
    return ctx.item_mean(i) + num / den;
}

Prediction predict_hb1(const TrainContext& ctx, const SimilarityMatrix& user_sim,
                       const SimilarityMatrix& item_sim, std::uint32_t u, std::uint32_t i,
                       const PredictorSpec& spec) {
    const auto& train = ctx.train();
    auto raters = rater_indices(train, i, u);
    auto n_u = static_cast<std::uint32_t>(raters.size());
    if (n_u >= spec.k) return predict_user_based(ctx, user_sim, u, i, spec);

    if (!ctx.user_has_ratings(u) && spec.fallback == Fallback::skip) {
        Prediction p;
        p.abstained = true;
        return p;
    }

    // Every one of the N_u raters contributes its real rating.
    auto rater_neighbors = select_neighbors(user_sim, u, raters, n_u);
    double num1 = 0, den1 = 0;
    for (const auto& nb : rater_neighbors) {
        double r_ki = *train.rating(nb.index, i);
        num1 += nb.score * (r_ki - ctx.user_mean(nb.index));
        den1 += std::fabs(nb.score);
    }

    // The K - N_u most similar users who did not rate i contribute
    // intermediate ratings instead.
    std::vector<bool> is_rater(train.n_users(), false);
    for (auto r : raters) is_rater[r] = true;
    std::vector<std::uint32_t> non_raters;
    non_raters.reserve(train.n_users());
    for (std::uint32_t k = 0; k < train.n_users(); ++k)
        if (k != u && !is_rater[k]) non_raters.push_back(k);
    auto similar = select_neighbors(user_sim, u, non_raters, spec.k - n_u);

    std::uint32_t ir_used = 0;
    double num2 = 0, den2 = 0;
    for (const auto& nb : similar) {
        double ir = intermediate_rating(ctx, item_sim, nb.index, i, spec.k_items);
        num2 += nb.score * (ir - ctx.user_mean(nb.index));
        den2 += std::fabs(nb.score);
        ++ir_used;
    }

    double raw;
    if (spec.hb1_form == Hb1Form::joint) {
        // One neighborhood of size up to K, single denominator.
        double num = num1 + num2;
        double den = den1 + den2;
        if ((rater_neighbors.empty() && similar.empty()) || den == 0.0)
            return fallback_prediction(ctx.user_mean(u), ctx, spec);
        raw = ctx.user_mean(u) + num / den;
    } else {
        // Two separately normalized corrections; a term with no usable
        // neighbors (or an all-zero denominator) contributes nothing.
        bool term1_live = !rater_neighbors.empty() && den1 != 0.0;
        bool term2_live = !similar.empty() && den2 != 0.0;
        if (!term1_live && !term2_live) return fallback_prediction(ctx.user_mean(u), ctx, spec);
        raw = ctx.user_mean(u) + (term1_live ? num1 / den1 : 0.0) +
              (term2_live ? num2 / den2 : 0.0);
    }

    Prediction p = finish(raw, ctx, spec);
    p.intermediate_used = ir_used;
    p.neighbors_used = static_cast<std::uint32_t>(rater_neighbors.size() + similar.size());
    return p;
}

Prediction predict_hb2(const TrainContext& ctx, const SimilarityMatrix& user_sim,
                       const SimilarityMatrix& item_sim, std::uint32_t u, std::uint32_t i,
                       const PredictorSpec& spec) {
    const auto& train = ctx.train();
    if (!ctx.user_has_ratings(u) && spec.fallback == Fallback::skip) {
        Prediction p;
        p.abstained = true;
        return p;
    }

    std::vector<std::uint32_t> everyone;
    everyone.reserve(train.n_users());
    for (std::uint32_t k = 0; k < train.n_users(); ++k)
        if (k != u) everyone.push_back(k);
    auto neighbors = select_neighbors(user_sim, u, everyone, spec.k);

    double num = 0, den = 0;
    std::uint32_t ir_used = 0;
    for (const auto& nb : neighbors) {
        double contribution;
        if (auto r_ki = train.rating(nb.index, i)) {
            contribution = *r_ki - ctx.user_mean(nb.index);
        } else {
            contribution =
                intermediate_rating(ctx, item_sim, nb.index, i, spec.k_items) -
                ctx.user_mean(nb.index);
            ++ir_used;
        }
        num += nb.score * contribution;
        den += std::fabs(nb.score);
    }
    if (neighbors.empty() || den == 0.0) return fallback_prediction(ctx.user_mean(u), ctx, spec);

    Prediction p = finish(ctx.user_mean(u) + num / den, ctx, spec);
    p.neighbors_used = static_cast<std::uint32_t>(neighbors.size());
    p.intermediate_used = ir_used;
    return p;
}

Prediction predict(const TrainContext& ctx, const SimilarityMatrix* user_sim,
                   const SimilarityMatrix* item_sim, std::uint32_t u, std::uint32_t i,
                   const PredictorSpec& spec) {
    switch (spec.method) {
        case Method::user:
            if (!user_sim) throw DomainError("user-based prediction needs a user-axis similarity");
            return predict_user_based(ctx, *user_sim, u, i, spec);
        case Method::item:
            if (!item_sim) throw DomainError("item-based prediction needs an item-axis similarity");
            return predict_item_based(ctx, *item_sim, u, i, spec);
        case Method::hb1:
            if (!user_sim || !item_sim)
                throw DomainError("hb1 needs user-axis and item-axis similarities");
            return predict_hb1(ctx, *user_sim, *item_sim, u, i, spec);
        case Method::hb2:
            if (!user_sim || !item_sim)
                throw DomainError("hb2 needs user-axis and item-axis similarities");
            return predict_hb2(ctx, *user_sim, *item_sim, u, i, spec);
    }
    throw DomainError("unhandled method");
}

} // namespace netcf
