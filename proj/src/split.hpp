#ifndef NETCF_SPLIT_HPP
#define NETCF_SPLIT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rating_matrix.hpp"

namespace netcf {

/// Entities on one axis whose rating count lies in [min_count, max_count];
/// max_count empty means unbounded.
struct EntityGroup {
    Axis axis = Axis::user;
    std::uint32_t min_count = 0;
    std::optional<std::uint32_t> max_count;
    std::vector<std::uint32_t> members; // ascending indices

    std::string label() const;
};

struct HeldOutRating {
    std::uint32_t user;
    std::uint32_t item;
    double value;
};

/// Train matrix plus the held-out test cells; train and test are disjoint and
/// their union is the source restricted to the sampled entities.
struct SplitPair {
    RatingMatrix train;
    std::vector<HeldOutRating> test; // ordered by (entity, counterpart)
    std::vector<std::uint32_t> sampled; // ascending entity indices on the group axis
    std::uint64_t seed = 0;
};

EntityGroup group_by_count(const RatingMatrix& m, Axis axis, std::uint32_t lo,
                           std::optional<std::uint32_t> hi);

/// Samples min(sample_size, |targets|) entities without replacement and moves
/// per-entity ratings into the test set. Entities holding fewer than
/// per_entity_deletions + 5 ratings give up count - 5 ratings instead
/// (never fewer than 1), so no sampled entity is voided entirely.
/// Throws DomainError when the target group is empty.
SplitPair holdout_split(const RatingMatrix& m, const EntityGroup& targets,
                        std::uint32_t sample_size, std::uint32_t per_entity_deletions,
                        std::uint64_t seed);

/// Removes floor(fraction * count) ratings from every entity on `axis`.
/// Entities on the opposite axis that end up with zero ratings are dropped
/// and the opposite-axis indices re-densified; axis-side entities are kept
/// even when empty. fraction 0 returns the input unchanged.
RatingMatrix sparsify(const RatingMatrix& m, double fraction_removed, Axis axis,
                      std::uint64_t seed);

} // namespace netcf

#endif
