#include "metrics.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace netcf {

double rmse(std::span<const double> errors) {
    if (errors.empty()) throw DomainError("rmse of an empty error vector is undefined");
    double acc = 0;
    for (double e : errors) acc += e * e;
    return std::sqrt(acc / static_cast<double>(errors.size()));
}

double mae(std::span<const double> errors) {
    if (errors.empty()) throw DomainError("mae of an empty error vector is undefined");
    double acc = 0;
    for (double e : errors) acc += std::fabs(e);
    return acc / static_cast<double>(errors.size());
}

namespace {

/// Indices ordered by descending value, abstained last, ties ascending index.
std::vector<std::uint32_t> ranked_by_predicted(
    const std::map<std::uint32_t, PredictedValue>& predicted) {
    std::vector<std::uint32_t> idx;
    idx.reserve(predicted.size());
    for (const auto& [k, v] : predicted) idx.push_back(k);
    std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        const auto& va = predicted.at(a);
        const auto& vb = predicted.at(b);
        if (va.has_value() != vb.has_value()) return va.has_value();
        if (va && vb && *va != *vb) return *va > *vb;
        return a < b;
    });
    return idx;
}

} // namespace

F1Result f1_score(const std::map<std::uint32_t, PredictedValue>& predicted,
                  const std::map<std::uint32_t, double>& actual, double threshold,
                  std::uint32_t list_size) {
    F1Result out;

    std::vector<std::uint32_t> relevant;
    for (const auto& [k, v] : actual)
        if (v >= threshold) relevant.push_back(k);

    std::vector<std::uint32_t> recommended;
    for (auto k : ranked_by_predicted(predicted)) {
        if (recommended.size() >= list_size) break;
        const auto& v = predicted.at(k);
        if (v && *v >= threshold) recommended.push_back(k);
    }

    if (relevant.empty() || recommended.empty()) return out; // inapplicable, all zero

    std::size_t hits = 0;
    for (auto k : recommended)
        if (std::binary_search(relevant.begin(), relevant.end(), k)) ++hits;

    out.precision = static_cast<double>(hits) / static_cast<double>(recommended.size());
    out.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
    out.f1 = (out.precision + out.recall) == 0.0
                 ? 0.0
                 : 2.0 * out.precision * out.recall / (out.precision + out.recall);
    out.applicable = true;
    return out;
}

BcriResult bcri(const std::map<std::uint32_t, PredictedValue>& predicted,
                const std::map<std::uint32_t, double>& actual, std::uint32_t t) {
    BcriResult out;
    out.t_used = t;
    if (actual.size() < t) {
        out.t_used = static_cast<std::uint32_t>(actual.size());
        out.truncated = true;
    }
    if (out.t_used == 0) return out;

    std::vector<std::uint32_t> by_actual;
    by_actual.reserve(actual.size());
    for (const auto& [k, v] : actual) by_actual.push_back(k);
    std::stable_sort(by_actual.begin(), by_actual.end(), [&](std::uint32_t a, std::uint32_t b) {
        double va = actual.at(a), vb = actual.at(b);
        if (va != vb) return va > vb;
        return a < b;
    });
    by_actual.resize(out.t_used);
    std::sort(by_actual.begin(), by_actual.end());

    auto by_predicted = ranked_by_predicted(predicted);
    if (by_predicted.size() > out.t_used) by_predicted.resize(out.t_used);

    for (auto k : by_predicted)
        if (std::binary_search(by_actual.begin(), by_actual.end(), k)) ++out.overlap;
    return out;
}

std::size_t count_undefined(const SimilarityMatrix& s, std::span<const std::uint32_t> anchors,
                            std::span<const std::uint32_t> candidates) {
    std::size_t count = 0;
    for (auto a : anchors)
        for (auto c : candidates) {
            if (a == c) continue;
            if (!s.defined(a, c)) ++count;
        }
    return count;
}

EvaluationReport aggregate_report(std::vector<EntityMetrics> per_entity) {
    EvaluationReport r;
    r.per_entity = std::move(per_entity);
    r.entities_evaluated = static_cast<std::uint32_t>(r.per_entity.size());

    double rmse_sum = 0, mae_sum = 0;
    std::uint32_t rmse_n = 0;
    double prec_sum = 0, rec_sum = 0, f1_sum = 0, f1_app_sum = 0, bcri_sum = 0;
    std::uint32_t f1_app_n = 0;
    for (const auto& e : r.per_entity) {
        if (e.rmse) {
            rmse_sum += *e.rmse;
            mae_sum += *e.mae;
            ++rmse_n;
        }
        r.abstained_count += e.n_test - e.n_valued;
        prec_sum += e.f1.precision;
        rec_sum += e.f1.recall;
        f1_sum += e.f1.f1;
        if (e.f1.applicable) {
            f1_app_sum += e.f1.f1;
            ++f1_app_n;
        } else {
            ++r.f1_inapplicable_count;
        }
        bcri_sum += static_cast<double>(e.bcri.overlap);
    }
    if (rmse_n > 0) {
        r.rmse = rmse_sum / rmse_n;
        r.mae = mae_sum / rmse_n;
    }
    if (r.entities_evaluated > 0) {
        r.precision = prec_sum / r.entities_evaluated;
        r.recall = rec_sum / r.entities_evaluated;
        r.f1 = f1_sum / r.entities_evaluated;
        r.bcri = bcri_sum / r.entities_evaluated;
    }
    if (f1_app_n > 0) r.f1_applicable = f1_app_sum / f1_app_n;
    return r;
}

} // namespace netcf
