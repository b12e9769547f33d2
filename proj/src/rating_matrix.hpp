#ifndef NETCF_RATING_MATRIX_HPP
#define NETCF_RATING_MATRIX_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace netcf {

enum class Axis { user, item };

inline const char* axis_name(Axis a) { return a == Axis::user ? "user" : "item"; }

/// Inclusive integer rating range; 0 is reserved for "unrated" and is never a
/// stored value.
struct RatingDomain {
    int lo = 1;
    int hi = 5;
    double median() const { return (lo + hi) / 2.0; }
    double span() const { return static_cast<double>(hi - lo); }
    bool contains(double r) const { return r >= lo && r <= hi; }
};

/// One stored rating seen from either axis: `index` is the counterpart entity
/// (item index in a user's list, user index in an item's list).
struct RatedEntry {
    std::uint32_t index;
    double value;
};

/// Raw (user, item, rating) triple with dense indices; the construction unit
/// for matrices built in code.
struct RatingTriple {
    std::uint32_t user;
    std::uint32_t item;
    double value;
};

/// Sparse M x N rating matrix. Immutable after construction: loaders, splits
/// and sparsifiers all produce fresh values, so instances are safe to share
/// across threads. Indices are dense and 0-based; the original ids are kept
/// for round-tripping.
class RatingMatrix {
public:
    RatingMatrix() = default;

    /// Builds from dense-index triples. Duplicate (user,item) pairs keep the
    /// last occurrence. Throws ValidationError on out-of-domain values.
    static RatingMatrix from_triples(std::uint32_t n_users, std::uint32_t n_items,
                                     const std::vector<RatingTriple>& triples,
                                     RatingDomain domain,
                                     std::vector<std::string> user_ids = {},
                                     std::vector<std::string> item_ids = {});

    std::uint32_t n_users() const { return n_users_; }
    std::uint32_t n_items() const { return n_items_; }
    std::uint32_t n(Axis a) const { return a == Axis::user ? n_users_ : n_items_; }
    std::size_t n_ratings() const { return n_ratings_; }
    RatingDomain domain() const { return domain_; }

    /// Percentage of filled cells, 100 * |ratings| / (M*N); 0 for empty dims.
    double density() const;

    /// Ratings of one user, sorted by item index.
    const std::vector<RatedEntry>& user_ratings(std::uint32_t u) const { return by_user_[u]; }
    /// Ratings of one item, sorted by user index.
    const std::vector<RatedEntry>& item_ratings(std::uint32_t i) const { return by_item_[i]; }
    /// Entity profile on an axis: user_ratings or item_ratings.
    const std::vector<RatedEntry>& ratings(Axis a, std::uint32_t e) const {
        return a == Axis::user ? by_user_[e] : by_item_[e];
    }

    std::optional<double> rating(std::uint32_t u, std::uint32_t i) const;

    const std::string& user_id(std::uint32_t u) const { return user_ids_[u]; }
    const std::string& item_id(std::uint32_t i) const { return item_ids_[i]; }
    const std::vector<std::string>& user_ids() const { return user_ids_; }
    const std::vector<std::string>& item_ids() const { return item_ids_; }
    std::optional<std::uint32_t> find_user(const std::string& raw_id) const;
    std::optional<std::uint32_t> find_item(const std::string& raw_id) const;

    /// Mean rating of an entity; nullopt when it has no ratings.
    std::optional<double> entity_mean(Axis a, std::uint32_t e) const;
    /// Mean over all stored ratings; domain median when the matrix is empty.
    double global_mean() const;

    std::vector<RatingTriple> to_triples() const;

    /// FNV-1a over dims, domain, ids and all ratings in index order.
    std::uint64_t content_hash() const;

private:
    std::uint32_t n_users_ = 0;
    std::uint32_t n_items_ = 0;
    std::size_t n_ratings_ = 0;
    RatingDomain domain_;
    std::vector<std::vector<RatedEntry>> by_user_;
    std::vector<std::vector<RatedEntry>> by_item_;
    std::vector<std::string> user_ids_;
    std::vector<std::string> item_ids_;
};

} // namespace netcf

#endif
