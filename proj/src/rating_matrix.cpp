#include "rating_matrix.hpp"

#include <algorithm>
#include <unordered_map>

#include "errors.hpp"
#include "hash.hpp"

namespace netcf {

RatingMatrix RatingMatrix::from_triples(std::uint32_t n_users, std::uint32_t n_items,
                                        const std::vector<RatingTriple>& triples,
                                        RatingDomain domain,
                                        std::vector<std::string> user_ids,
                                        std::vector<std::string> item_ids) {
    RatingMatrix m;
    m.n_users_ = n_users;
    m.n_items_ = n_items;
    m.domain_ = domain;
    m.by_user_.resize(n_users);
    m.by_item_.resize(n_items);

    // Last occurrence wins for duplicate cells.
    std::unordered_map<std::uint64_t, double> cells;
    cells.reserve(triples.size());
    for (const auto& t : triples) {
        if (t.user >= n_users || t.item >= n_items)
            throw ValidationError("rating index out of declared dimensions");
        if (!domain.contains(t.value) || t.value != static_cast<double>(static_cast<long long>(t.value)))
            throw ValidationError("rating " + std::to_string(t.value) + " outside rating domain [" +
                                  std::to_string(domain.lo) + "-" + std::to_string(domain.hi) + "]");
        cells[(static_cast<std::uint64_t>(t.user) << 32) | t.item] = t.value;
    }

    for (const auto& [key, value] : cells) {
        auto u = static_cast<std::uint32_t>(key >> 32);
        auto i = static_cast<std::uint32_t>(key & 0xFFFFFFFFULL);
        m.by_user_[u].push_back({i, value});
        m.by_item_[i].push_back({u, value});
    }
    for (auto& row : m.by_user_)
        std::sort(row.begin(), row.end(), [](const RatedEntry& a, const RatedEntry& b) { return a.index < b.index; });
    for (auto& col : m.by_item_)
        std::sort(col.begin(), col.end(), [](const RatedEntry& a, const RatedEntry& b) { return a.index < b.index; });
    m.n_ratings_ = cells.size();

    if (user_ids.empty()) {
        user_ids.resize(n_users);
        for (std::uint32_t u = 0; u < n_users; ++u) user_ids[u] = std::to_string(u + 1);
    }
    if (item_ids.empty()) {
        item_ids.resize(n_items);
        for (std::uint32_t i = 0; i < n_items; ++i) item_ids[i] = std::to_string(i + 1);
    }
    if (user_ids.size() != n_users || item_ids.size() != n_items)
        throw ValidationError("id table size does not match declared dimensions");
    m.user_ids_ = std::move(user_ids);
    m.item_ids_ = std::move(item_ids);
    return m;
}

double RatingMatrix::density() const {
    if (n_users_ == 0 || n_items_ == 0) return 0.0;
    return 100.0 * static_cast<double>(n_ratings_) /
           (static_cast<double>(n_users_) * static_cast<double>(n_items_));
}

std::optional<double> RatingMatrix::rating(std::uint32_t u, std::uint32_t i) const {
    const auto& row = by_user_[u];
    auto it = std::lower_bound(row.begin(), row.end(), i,
                               [](const RatedEntry& e, std::uint32_t idx) { return e.index < idx; });
    if (it != row.end() && it->index == i) return it->value;
    return std::nullopt;
}

std::optional<std::uint32_t> RatingMatrix::find_user(const std::string& raw_id) const {
    for (std::uint32_t u = 0; u < n_users_; ++u)
        if (user_ids_[u] == raw_id) return u;
    return std::nullopt;
}

std::optional<std::uint32_t> RatingMatrix::find_item(const std::string& raw_id) const {
    for (std::uint32_t i = 0; i < n_items_; ++i)
        if (item_ids_[i] == raw_id) return i;
    return std::nullopt;
}

std::optional<double> RatingMatrix::entity_mean(Axis a, std::uint32_t e) const {
    const auto& row = ratings(a, e);
    if (row.empty()) return std::nullopt;
    double sum = 0;
    for (const auto& r : row) sum += r.value;
    return sum / static_cast<double>(row.size());
}

double RatingMatrix::global_mean() const {
    if (n_ratings_ == 0) return domain_.median();
    double sum = 0;
    for (const auto& row : by_user_)
        for (const auto& r : row) sum += r.value;
    return sum / static_cast<double>(n_ratings_);
}

std::vector<RatingTriple> RatingMatrix::to_triples() const {
    std::vector<RatingTriple> out;
    out.reserve(n_ratings_);
    for (std::uint32_t u = 0; u < n_users_; ++u)
        for (const auto& r : by_user_[u]) out.push_back({u, r.index, r.value});
    return out;
}

std::uint64_t RatingMatrix::content_hash() const {
    Fnv1a h;
    h.add_u32(n_users_);
    h.add_u32(n_items_);
    h.add_u32(static_cast<std::uint32_t>(domain_.lo));
    h.add_u32(static_cast<std::uint32_t>(domain_.hi));
    for (const auto& id : user_ids_) h.add_string(id);
    for (const auto& id : item_ids_) h.add_string(id);
    for (std::uint32_t u = 0; u < n_users_; ++u)
        for (const auto& r : by_user_[u]) {
            h.add_u32(u);
            h.add_u32(r.index);
            h.add_double(r.value);
        }
    return h.value();
}

} // namespace netcf
