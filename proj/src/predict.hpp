#ifndef NETCF_PREDICT_HPP
#define NETCF_PREDICT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rating_matrix.hpp"
#include "similarity.hpp"

namespace netcf {

enum class Method { user, item, hb1, hb2 };
enum class Fallback { mean, skip };

const char* method_name(Method m);
Method parse_method_name(const std::string& name);

/// Baseline form for item-based prediction: `deviation` follows the printed
/// formula (item mean plus mean-adjusted deviations of the similar items);
/// `weighted_average` is the classical plain weighted average of the user's
/// ratings on the similar items.
enum class ItemBaseline { deviation, weighted_average };

/// Shape of hybrid 1 when fewer than K users rated the item. `joint` fills
/// the neighborhood to K with the most similar non-raters and evaluates one
/// weighted sum mixing real ratings and intermediate ratings under a single
/// denominator. `split_terms` evaluates the rater sum and the
/// intermediate-rating sum as two separately normalized corrections and adds
/// both; the two corrections estimate the same deviation, so this form
/// systematically overshoots and loses accuracy as K grows.
enum class Hb1Form { joint, split_terms };

struct PredictorSpec {
    Method method = Method::user;
    std::uint32_t k = 10;
    std::uint32_t k_items = 10; // neighbor items per intermediate rating
    Fallback fallback = Fallback::mean;
    bool clamp = true;
    ItemBaseline item_baseline = ItemBaseline::deviation;
    Hb1Form hb1_form = Hb1Form::joint;
};

struct Prediction {
    double value = 0.0;     // clamped when spec.clamp is set
    double raw = 0.0;       // unclamped formula value (= value when fallback)
    bool abstained = false; // only under Fallback::skip
    bool used_fallback = false;
    std::uint32_t neighbors_used = 0;
    std::uint32_t intermediate_used = 0;
};

/// Per-train-matrix precomputation shared by all predictors: entity means
/// (global train mean substituted for empty profiles) and the global mean.
class TrainContext {
public:
    explicit TrainContext(const RatingMatrix& train);

    const RatingMatrix& train() const { return *train_; }
    double user_mean(std::uint32_t u) const { return user_mean_[u]; }
    double item_mean(std::uint32_t i) const { return item_mean_[i]; }
    double global_mean() const { return global_mean_; }
    bool user_has_ratings(std::uint32_t u) const { return !train_->user_ratings(u).empty(); }
    bool item_has_ratings(std::uint32_t i) const { return !train_->item_ratings(i).empty(); }

private:
    const RatingMatrix* train_;
    std::vector<double> user_mean_, item_mean_;
    double global_mean_;
};

struct ScoredIndex {
    std::uint32_t index;
    double score;
};

/// Top-k candidates by descending score; Undefined scores are skipped and
/// ties break toward the smaller index. Returns fewer than k when fewer
/// defined scores exist.
std::vector<ScoredIndex> select_neighbors(const SimilarityMatrix& s, std::uint32_t anchor,
                                          std::span<const std::uint32_t> candidates,
                                          std::uint32_t k);

/// Mean-adjusted weighted deviation from the anchor's rating mean, over the
/// K most similar users who rated item i.
Prediction predict_user_based(const TrainContext& ctx, const SimilarityMatrix& user_sim,
                              std::uint32_t u, std::uint32_t i, const PredictorSpec& spec);

/// Item-axis mirror: K most similar items among those the user rated.
Prediction predict_item_based(const TrainContext& ctx, const SimilarityMatrix& item_sim,
                              std::uint32_t u, std::uint32_t i, const PredictorSpec& spec);

/// Synthesized rating of `user_k` for item i: an item-based prediction over
/// the k_items most structurally similar items user_k has rated. Falls back
/// to the item mean when user_k rated nothing usable. Unclamped.
double intermediate_rating(const TrainContext& ctx, const SimilarityMatrix& item_sim,
                           std::uint32_t user_k, std::uint32_t i, std::uint32_t k_items);

/// Hybrid 1: plain user-based prediction while at least K users rated i;
/// otherwise all N_u raters contribute their real ratings and the K - N_u
/// users most similar to u among the non-raters contribute intermediate
/// ratings (combined per spec.hb1_form).
Prediction predict_hb1(const TrainContext& ctx, const SimilarityMatrix& user_sim,
                       const SimilarityMatrix& item_sim, std::uint32_t u, std::uint32_t i,
                       const PredictorSpec& spec);

/// Hybrid 2: the K users most similar to u regardless of whether they rated
/// i; each neighbor contributes its real rating when present, otherwise its
/// intermediate rating, inside a single weighted sum.
Prediction predict_hb2(const TrainContext& ctx, const SimilarityMatrix& user_sim,
                       const SimilarityMatrix& item_sim, std::uint32_t u, std::uint32_t i,
                       const PredictorSpec& spec);

/// Dispatch on spec.method. user_sim is the active-axis source for
/// user/hb1/hb2, item_sim for item/hb1/hb2 (unused otherwise).
Prediction predict(const TrainContext& ctx, const SimilarityMatrix* user_sim,
                   const SimilarityMatrix* item_sim, std::uint32_t u, std::uint32_t i,
                   const PredictorSpec& spec);

} // namespace netcf

#endif
