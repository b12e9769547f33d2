#include "split.hpp"

#include <algorithm>
#include <set>

#include "errors.hpp"
#include "rng.hpp"

namespace netcf {

std::string EntityGroup::label() const {
    std::string s(1, axis == Axis::user ? 'u' : 'i');
    s += std::to_string(min_count);
    s += '-';
    if (max_count) s += std::to_string(*max_count);
    return s;
}

EntityGroup group_by_count(const RatingMatrix& m, Axis axis, std::uint32_t lo,
                           std::optional<std::uint32_t> hi) {
    if (hi && *hi < lo) throw DomainError("group range upper bound below lower bound");
    EntityGroup g{axis, lo, hi, {}};
    for (std::uint32_t e = 0; e < m.n(axis); ++e) {
        auto count = static_cast<std::uint32_t>(m.ratings(axis, e).size());
        if (count >= lo && (!hi || count <= *hi)) g.members.push_back(e);
    }
    return g;
}

SplitPair holdout_split(const RatingMatrix& m, const EntityGroup& targets,
                        std::uint32_t sample_size, std::uint32_t per_entity_deletions,
                        std::uint64_t seed) {
    if (per_entity_deletions < 1) throw DomainError("per-entity deletions must be >= 1");
    if (targets.members.empty()) throw DomainError("no entities to sample");

    Rng rng(seed);
    auto n_targets = static_cast<std::uint32_t>(targets.members.size());
    auto picks = rng.sample(n_targets, std::min(sample_size, n_targets));

    SplitPair out;
    out.seed = seed;
    for (auto p : picks) out.sampled.push_back(targets.members[p]);

    std::set<std::uint64_t> removed; // (user << 32) | item
    for (auto e : out.sampled) {
        const auto& profile = m.ratings(targets.axis, e);
        auto count = static_cast<std::uint32_t>(profile.size());
        std::uint32_t d = per_entity_deletions;
        if (count < per_entity_deletions + 5) d = count > 5 ? count - 5 : 1;
        for (auto pos : rng.sample(count, d)) {
            const auto& r = profile[pos];
            std::uint32_t u = targets.axis == Axis::user ? e : r.index;
            std::uint32_t i = targets.axis == Axis::user ? r.index : e;
            removed.insert((static_cast<std::uint64_t>(u) << 32) | i);
            out.test.push_back({u, i, r.value});
        }
    }

    std::vector<RatingTriple> kept;
    kept.reserve(m.n_ratings() - out.test.size());
    for (const auto& t : m.to_triples())
        if (!removed.count((static_cast<std::uint64_t>(t.user) << 32) | t.item)) kept.push_back(t);
    out.train = RatingMatrix::from_triples(m.n_users(), m.n_items(), kept, m.domain(),
                                           m.user_ids(), m.item_ids());
    return out;
}

RatingMatrix sparsify(const RatingMatrix& m, double fraction_removed, Axis axis,
                      std::uint64_t seed) {
    if (fraction_removed < 0.0 || fraction_removed >= 1.0)
        throw DomainError("sparsify fraction must lie in [0, 1)");
    if (fraction_removed == 0.0) return m;

    Rng rng(seed);
    std::vector<RatingTriple> kept;
    for (std::uint32_t e = 0; e < m.n(axis); ++e) {
        const auto& profile = m.ratings(axis, e);
        auto count = static_cast<std::uint32_t>(profile.size());
        auto n_remove =
            static_cast<std::uint32_t>(fraction_removed * static_cast<double>(count));
        auto removed = rng.sample(count, n_remove);
        std::uint32_t cursor = 0;
        for (std::uint32_t pos = 0; pos < count; ++pos) {
            if (cursor < removed.size() && removed[cursor] == pos) {
                ++cursor;
                continue;
            }
            const auto& r = profile[pos];
            std::uint32_t u = axis == Axis::user ? e : r.index;
            std::uint32_t i = axis == Axis::user ? r.index : e;
            kept.push_back({u, i, r.value});
        }
    }

    // Drop opposite-axis entities that lost every rating; re-densify their indices.
    Axis opposite = axis == Axis::user ? Axis::item : Axis::user;
    std::uint32_t n_opp = m.n(opposite);
    std::vector<bool> alive(n_opp, false);
    for (const auto& t : kept) alive[opposite == Axis::user ? t.user : t.item] = true;
    std::vector<std::uint32_t> remap(n_opp, 0);
    std::vector<std::string> opp_ids;
    std::uint32_t next = 0;
    for (std::uint32_t e = 0; e < n_opp; ++e)
        if (alive[e]) {
            remap[e] = next++;
            opp_ids.push_back(opposite == Axis::user ? m.user_id(e) : m.item_id(e));
        }
    for (auto& t : kept) {
        if (opposite == Axis::user)
            t.user = remap[t.user];
        else
            t.item = remap[t.item];
    }

    std::uint32_t n_users = axis == Axis::user ? m.n_users() : next;
    std::uint32_t n_items = axis == Axis::user ? next : m.n_items();
    auto user_ids = axis == Axis::user ? m.user_ids() : opp_ids;
    auto item_ids = axis == Axis::user ? opp_ids : m.item_ids();
    return RatingMatrix::from_triples(n_users, n_items, kept, m.domain(), std::move(user_ids),
                                      std::move(item_ids));
}

} // namespace netcf
