#ifndef NETCF_SIMILARITY_HPP
#define NETCF_SIMILARITY_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rating_matrix.hpp"

namespace netcf {

/// Symmetric pairwise scores over users or items. Entries may be Undefined
/// (empty/singleton co-rated set or a vanished denominator); Undefined is a
/// first-class value exposed as an empty optional, never a NaN leaking out.
/// The diagonal is always Undefined: self-similarity is never selectable.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    SimilarityMatrix(Axis axis, std::uint32_t n, std::string measure_tag);

    Axis axis() const { return axis_; }
    std::uint32_t size() const { return n_; }
    const std::string& measure_tag() const { return tag_; }

    bool defined(std::uint32_t i, std::uint32_t j) const { return raw(i, j) == raw(i, j); }
    std::optional<double> get(std::uint32_t i, std::uint32_t j) const {
        double v = raw(i, j);
        if (v != v) return std::nullopt;
        return v;
    }
    /// Sets both (i,j) and (j,i); the diagonal is not writable.
    void set(std::uint32_t i, std::uint32_t j, double v);

    std::size_t undefined_pairs() const; // unordered off-diagonal pairs

    /// Provenance of structural scores (set by the network module).
    struct StructuralMeta {
        bool present = false;
        double beta = 0.0;
        double lambda1 = 0.0;
        std::uint64_t network_hash = 0;
    };
    const StructuralMeta& meta() const { return meta_; }
    void set_meta(StructuralMeta m) { meta_ = m; }

    std::uint64_t content_hash() const;

    // Internal NaN-encoded storage, exposed for the cache codec.
    const std::vector<double>& storage() const { return s_; }
    void load_storage(std::vector<double> s);

private:
    double raw(std::uint32_t i, std::uint32_t j) const {
        return s_[static_cast<std::size_t>(i) * n_ + j];
    }

    Axis axis_ = Axis::user;
    std::uint32_t n_ = 0;
    std::string tag_;
    StructuralMeta meta_;
    std::vector<double> s_; // n*n, quiet NaN = Undefined
};

/// Mean used to center PCC vectors: the classical mean over the co-rated
/// subset, or each entity's global rating mean.
enum class PccCentering { corated, global };

/// Pearson correlation over co-rated entries. Undefined when fewer than two
/// co-rated entries exist or either centered vector has zero norm.
SimilarityMatrix pcc(const RatingMatrix& m, Axis axis,
                     PccCentering centering = PccCentering::corated);

/// Cosine of the full sparse vectors (unrated = 0). Undefined only when an
/// entity has no ratings at all; disjoint supports score 0.
SimilarityMatrix cosine(const RatingMatrix& m, Axis axis);

/// Item-item similarity with ratings centered by each rater's global mean.
/// Throws DomainError for axis = user.
SimilarityMatrix adjusted_cosine(const RatingMatrix& m, Axis axis);

/// PCC variant centered on the rating-scale median instead of vector means.
SimilarityMatrix cpcc(const RatingMatrix& m, Axis axis);

/// |rated(a) n rated(b)| / |rated(a) u rated(b)|; Undefined only when both
/// profiles are empty.
SimilarityMatrix jaccard_corated(const RatingMatrix& m, Axis axis);

/// Proximity-Impact-Popularity similarity, summed over co-rated entries.
/// Factors follow the Ahn formulation: two ratings "disagree" when they
/// straddle the scale median; proximity is (2*(hi-lo)+1 - d)^2 with the
/// rating distance d doubled on disagreement; impact is
/// (|r1-med|+1)*(|r2-med|+1), inverted on disagreement; popularity boosts
/// pairs on the same side of the co-rated entity's mean by
/// 1 + ((r1+r2)/2 - mu)^2. Undefined on an empty co-rated set.
SimilarityMatrix pip(const RatingMatrix& m, Axis axis);

/// New-heuristic similarity: sigmoid proximity/significance/singularity
/// summed over co-rated entries, scaled by the modified Jaccard
/// |A n B|/(|A|*|B|) and the rating-preference factor
/// 1 - 1/(1+exp(-|mu_a - mu_b|*|sig_a - sig_b|)). Undefined on an empty
/// co-rated set; defined values lie in (0,1).
SimilarityMatrix nhsm(const RatingMatrix& m, Axis axis);

/// CSV rows `i,j,score` over unordered pairs i<j, `NA` for Undefined.
void export_similarity_csv(const SimilarityMatrix& s, const std::string& path);

/// Compact binary cache. The key (dataset hash, measure, axis) is stored in
/// the header and checked on load; structural provenance rides along.
void save_similarity_cache(const SimilarityMatrix& s, std::uint64_t dataset_hash,
                           const std::string& path);
std::optional<SimilarityMatrix> load_similarity_cache(const std::string& path,
                                                      std::uint64_t dataset_hash,
                                                      const std::string& measure,
                                                      Axis axis);

} // namespace netcf

#endif
