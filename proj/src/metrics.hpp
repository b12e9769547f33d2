#ifndef NETCF_METRICS_HPP
#define NETCF_METRICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "similarity.hpp"

namespace netcf {

/// Root mean squared error over a non-empty error vector.
/// Throws DomainError on an empty vector.
double rmse(std::span<const double> errors);

/// Mean absolute error over a non-empty error vector.
double mae(std::span<const double> errors);

/// One counterpart entity's predicted value; empty optional = abstained.
/// Abstained predictions rank below every valued prediction.
using PredictedValue = std::optional<double>;

struct F1Result {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool applicable = false; // false when the relevant or recommended list is empty
};

/// Precision/recall/F1 of the top-`list_size` predictions (value >= threshold)
/// against the actually-relevant set (actual >= threshold). Inapplicable
/// cases score 0 on all three and are flagged.
F1Result f1_score(const std::map<std::uint32_t, PredictedValue>& predicted,
                  const std::map<std::uint32_t, double>& actual, double threshold,
                  std::uint32_t list_size);

struct BcriResult {
    std::uint32_t overlap = 0;
    std::uint32_t t_used = 0;
    bool truncated = false; // t was lowered to the test-set size
};

/// |top-t by actual  n  top-t by predicted|, ties broken by ascending index.
/// When fewer than t test entries exist, t is lowered and the result flagged.
BcriResult bcri(const std::map<std::uint32_t, PredictedValue>& predicted,
                const std::map<std::uint32_t, double>& actual, std::uint32_t t);

/// Number of (anchor, candidate) pairs with an Undefined score; self-pairs
/// are skipped.
std::size_t count_undefined(const SimilarityMatrix& s, std::span<const std::uint32_t> anchors,
                            std::span<const std::uint32_t> candidates);

struct EntityMetrics {
    std::string entity_id;
    std::uint32_t n_test = 0;
    std::uint32_t n_valued = 0; // non-abstained predictions
    std::optional<double> rmse;
    std::optional<double> mae;
    F1Result f1;
    BcriResult bcri;
};

/// Per-entity and aggregate evaluation of one experiment cell.
struct EvaluationReport {
    std::vector<EntityMetrics> per_entity;
    double rmse = 0.0, mae = 0.0;            // means over entities with valued predictions
    double precision = 0.0, recall = 0.0;    // means counting inapplicable as 0
    double f1 = 0.0;                         // same convention
    double f1_applicable = 0.0;              // mean over applicable entities only
    std::uint32_t f1_inapplicable_count = 0;
    double bcri = 0.0;                       // mean overlap
    std::size_t undefined_similarity_count = 0;
    std::uint32_t abstained_count = 0;
    std::uint32_t entities_evaluated = 0;
};

/// Unweighted aggregation over per-entity rows.
EvaluationReport aggregate_report(std::vector<EntityMetrics> per_entity);

} // namespace netcf

#endif
