#ifndef NETCF_NETWORK_HPP
#define NETCF_NETWORK_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "similarity.hpp"

namespace netcf {

/// Weighted undirected graph over users or items. An edge (i,j) exists iff
/// the source similarity is defined and nonzero; its weight is that
/// similarity (negative weights included). No self-loops.
class Network {
public:
    struct Edge {
        std::uint32_t to;
        double weight;
    };

    static Network from_similarity(const SimilarityMatrix& s);

    Axis axis() const { return axis_; }
    std::uint32_t size() const { return n_; }
    std::size_t edge_count() const { return edges_ / 2; }

    std::span<const Edge> neighbors(std::uint32_t i) const {
        return {adj_.data() + row_[i], row_[i + 1] - row_[i]};
    }
    std::uint32_t degree(std::uint32_t i) const {
        return static_cast<std::uint32_t>(row_[i + 1] - row_[i]);
    }

    /// Neighbor sets as bitsets, one row of ceil(n/64) words per node.
    const std::vector<std::uint64_t>& bitrows() const { return bits_; }
    std::size_t words_per_row() const { return words_; }

    std::uint64_t content_hash() const;

    /// CSV rows `i,j,weight` over undirected edges i<j.
    void export_edge_csv(const std::string& path) const;

private:
    Axis axis_ = Axis::user;
    std::uint32_t n_ = 0;
    std::size_t edges_ = 0; // directed count
    std::vector<std::size_t> row_;
    std::vector<Edge> adj_;
    std::vector<std::uint64_t> bits_;
    std::size_t words_ = 0;
};

enum class StructuralKind { common_neighbors, jaccard, katz };

const char* structural_kind_name(StructuralKind k);

/// Node-pair similarity derived from network topology. Scores are total
/// (every pair has a value); the diagonal is fixed at zero and never used.
class StructuralSimilarity {
public:
    StructuralSimilarity(StructuralKind kind, Axis axis, std::uint32_t n);

    StructuralKind kind() const { return kind_; }
    Axis axis() const { return axis_; }
    std::uint32_t size() const { return n_; }
    double beta() const { return beta_; }
    double lambda1() const { return lambda1_; }

    double get(std::uint32_t i, std::uint32_t j) const {
        return s_[static_cast<std::size_t>(i) * n_ + j];
    }
    void set(std::uint32_t i, std::uint32_t j, double v) {
        s_[static_cast<std::size_t>(i) * n_ + j] = v;
        s_[static_cast<std::size_t>(j) * n_ + i] = v;
    }
    void set_katz_params(double beta, double lambda1) {
        beta_ = beta;
        lambda1_ = lambda1;
    }

    /// View as a SimilarityMatrix (off-diagonal defined, diagonal Undefined)
    /// so structural scores plug into neighbor selection and caching.
    SimilarityMatrix to_similarity(const std::string& tag, std::uint64_t network_hash) const;

private:
    StructuralKind kind_;
    Axis axis_;
    std::uint32_t n_;
    double beta_ = 0.0;
    double lambda1_ = 0.0;
    std::vector<double> s_;
};

/// |gamma(i) n gamma(j)| on the binarized graph (any nonzero edge links).
StructuralSimilarity common_neighbors(const Network& g);

/// |gamma(i) n gamma(j)| / |gamma(i) u gamma(j)|; 0 when the union is empty.
StructuralSimilarity jaccard_network(const Network& g);

struct PowerIterationOptions {
    double rel_tolerance = 1e-8;
    // Near-degenerate +-lambda pairs converge at the pace of their gap, so
    // the cap leaves room for them; typical networks finish within dozens
    // of iterations.
    std::uint32_t max_iterations = 100000;
    std::uint64_t restart_seed = 0x5EEDF00DULL;
};

/// Dominant-magnitude eigenvalue |lambda_1| of the signed adjacency, by power
/// iteration from the all-ones vector with one seeded random restart on
/// stagnation. Throws DomainError on an edgeless graph and ConvergenceError
/// (carrying the last estimate and residual) when the cap is hit.
double spectral_radius(const Network& g, const PowerIterationOptions& opts = {});

/// Katz index: S = beta*A + beta^2*A^2 + ..., accumulated term by term until
/// the added term's max-norm drops below 1e-10 (or 1000 terms). beta empty
/// selects 0.85/lambda_1; an explicit beta with beta*lambda_1 >= 1 throws
/// DomainError before any series work. An edgeless graph yields all zeros.
StructuralSimilarity katz(const Network& g, std::optional<double> beta = std::nullopt);

} // namespace netcf

#endif
