#include "network.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "errors.hpp"
#include "hash.hpp"
#include "rng.hpp"

namespace netcf {

Network Network::from_similarity(const SimilarityMatrix& s) {
    Network g;
    g.axis_ = s.axis();
    g.n_ = s.size();
    g.words_ = (g.n_ + 63) / 64;
    g.row_.assign(g.n_ + 1, 0);
    g.bits_.assign(g.words_ * g.n_, 0);

    std::vector<std::size_t> degree(g.n_, 0);
    for (std::uint32_t i = 0; i < g.n_; ++i)
        for (std::uint32_t j = 0; j < g.n_; ++j) {
            if (i == j) continue;
            auto v = s.get(i, j);
            if (v && *v != 0.0) ++degree[i];
        }
    for (std::uint32_t i = 0; i < g.n_; ++i) g.row_[i + 1] = g.row_[i] + degree[i];
    g.adj_.resize(g.row_[g.n_]);

    std::vector<std::size_t> cursor(g.row_.begin(), g.row_.end() - 1);
    for (std::uint32_t i = 0; i < g.n_; ++i)
        for (std::uint32_t j = 0; j < g.n_; ++j) {
            if (i == j) continue;
            auto v = s.get(i, j);
            if (v && *v != 0.0) {
                g.adj_[cursor[i]++] = {j, *v};
                g.bits_[i * g.words_ + j / 64] |= 1ULL << (j % 64);
            }
        }
    g.edges_ = g.adj_.size();
    return g;
}

std::uint64_t Network::content_hash() const {
    Fnv1a h;
    h.add_u32(axis_ == Axis::user ? 0 : 1);
    h.add_u32(n_);
    for (std::uint32_t i = 0; i < n_; ++i)
        for (const auto& e : neighbors(i)) {
            h.add_u32(i);
            h.add_u32(e.to);
            h.add_double(e.weight);
        }
    return h.value();
}

void Network::export_edge_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write edge list: " + path);
    out << "i,j,weight\n";
    char buf[40];
    for (std::uint32_t i = 0; i < n_; ++i)
        for (const auto& e : neighbors(i))
            if (e.to > i) {
                std::snprintf(buf, sizeof buf, "%.17g", e.weight);
                out << i << ',' << e.to << ',' << buf << '\n';
            }
    if (!out) throw IoError("write failed: " + path);
}

const char* structural_kind_name(StructuralKind k) {
    switch (k) {
        case StructuralKind::common_neighbors: return "net-cn";
        case StructuralKind::jaccard: return "net-jaccard";
        case StructuralKind::katz: return "net-katz";
    }
    return "?";
}

StructuralSimilarity::StructuralSimilarity(StructuralKind kind, Axis axis, std::uint32_t n)
    : kind_(kind), axis_(axis), n_(n), s_(static_cast<std::size_t>(n) * n, 0.0) {}

SimilarityMatrix StructuralSimilarity::to_similarity(const std::string& tag,
                                                     std::uint64_t network_hash) const {
    SimilarityMatrix out(axis_, n_, tag);
    for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = i + 1; j < n_; ++j) out.set(i, j, get(i, j));
    SimilarityMatrix::StructuralMeta meta;
    meta.present = true;
    meta.beta = beta_;
    meta.lambda1 = lambda1_;
    meta.network_hash = network_hash;
    out.set_meta(meta);
    return out;
}

namespace {

std::size_t intersection_count(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words; ++w) c += std::popcount(a[w] & b[w]);
    return c;
}

} // namespace

StructuralSimilarity common_neighbors(const Network& g) {
    StructuralSimilarity out(StructuralKind::common_neighbors, g.axis(), g.size());
    const auto* bits = g.bitrows().data();
    std::size_t words = g.words_per_row();
    for (std::uint32_t i = 0; i < g.size(); ++i)
        for (std::uint32_t j = i + 1; j < g.size(); ++j)
            out.set(i, j, static_cast<double>(
                              intersection_count(bits + i * words, bits + j * words, words)));
    return out;
}

StructuralSimilarity jaccard_network(const Network& g) {
    StructuralSimilarity out(StructuralKind::jaccard, g.axis(), g.size());
    const auto* bits = g.bitrows().data();
    std::size_t words = g.words_per_row();
    for (std::uint32_t i = 0; i < g.size(); ++i)
        for (std::uint32_t j = i + 1; j < g.size(); ++j) {
            auto inter =
                static_cast<double>(intersection_count(bits + i * words, bits + j * words, words));
            double uni = static_cast<double>(g.degree(i)) + static_cast<double>(g.degree(j)) - inter;
            out.set(i, j, uni == 0.0 ? 0.0 : inter / uni);
        }
    return out;
}

namespace {

void multiply(const Network& g, const std::vector<double>& x, std::vector<double>& y) {
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        double acc = 0;
        for (const auto& e : g.neighbors(i)) acc += e.weight * x[e.to];
        y[i] = acc;
    }
}

double norm2(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace

double spectral_radius(const Network& g, const PowerIterationOptions& opts) {
    if (g.edge_count() == 0) throw DomainError("spectral radius of an edgeless network");

    std::uint32_t n = g.size();
    std::vector<double> q(n, 1.0), z(n);
    double inv = 1.0 / norm2(q);
    for (auto& v : q) v *= inv;

    // Estimates from ||A q|| with ||q|| = 1 converge geometrically; with a
    // near-degenerate +-lambda pair they do so along the even/odd parity
    // streams while consecutive diffs plateau, so convergence is judged on
    // both the consecutive and the two-apart sequences, extrapolating the
    // remaining error from the observed contraction rate.
    double est1 = 0.0, est2 = 0.0, residual = 0.0;
    double prev_diff = 0.0, prev_diff2 = 0.0, checkpoint_diff = 0.0;
    bool restarted = false;
    auto reset_history = [&] { est1 = est2 = prev_diff = prev_diff2 = 0.0; };
    for (std::uint32_t iter = 1; iter <= opts.max_iterations; ++iter) {
        multiply(g, q, z);
        double nz = norm2(z);
        if (nz == 0.0) {
            // Start vector in the null space; retry once from a seeded vector.
            if (restarted) return 0.0;
            restarted = true;
            Rng rng(opts.restart_seed);
            for (auto& v : q) v = rng.unit() - 0.5;
            inv = 1.0 / norm2(q);
            for (auto& v : q) v *= inv;
            reset_history();
            continue;
        }
        double next = nz;
        double scale = std::max(1.0, std::fabs(next));
        double diff = std::fabs(next - est1);
        double diff2 = std::fabs(next - est2);
        residual = diff / scale;

        auto stream_converged = [&](double d, double prev) {
            if (d <= 4.0 * std::numeric_limits<double>::epsilon() * scale) return true;
            if (prev > 0.0 && d < prev) {
                double rate = d / prev;
                return d * rate / (1.0 - rate) <= opts.rel_tolerance * scale;
            }
            return false;
        };
        if (iter >= 4 && (stream_converged(diff, prev_diff) || stream_converged(diff2, prev_diff2)))
            return next;

        prev_diff = diff;
        prev_diff2 = diff2;
        est2 = est1;
        est1 = next;

        // Stagnation check: if a whole window passes without the update
        // shrinking (e.g. the start vector is orthogonal to the dominant
        // eigenspace), restart once from a seeded random vector.
        std::uint32_t window = std::max<std::uint32_t>(200, opts.max_iterations / 10);
        if (iter % window == 0) {
            if (!restarted && diff > 0.9 * checkpoint_diff && checkpoint_diff > 0.0) {
                restarted = true;
                Rng rng(opts.restart_seed);
                for (auto& v : q) v = rng.unit() - 0.5;
                nz = norm2(q);
                for (auto& v : q) v /= nz;
                reset_history();
                checkpoint_diff = 0.0;
                continue;
            }
            checkpoint_diff = diff;
        }
        for (std::uint32_t i = 0; i < n; ++i) q[i] = z[i] / nz;
    }
    throw ConvergenceError("power iteration did not converge", est1, residual);
}

StructuralSimilarity katz(const Network& g, std::optional<double> beta) {
    std::uint32_t n = g.size();
    StructuralSimilarity out(StructuralKind::katz, g.axis(), n);
    if (g.edge_count() == 0) {
        out.set_katz_params(beta.value_or(0.0), 0.0);
        return out;
    }

    double lambda1 = spectral_radius(g);
    double b = beta ? *beta : 0.85 / lambda1;
    if (b * lambda1 >= 1.0)
        throw DomainError("katz series diverges: beta * lambda_1 = " +
                          std::to_string(b * lambda1) + " >= 1");

    constexpr double kTermTolerance = 1e-10;
    constexpr std::uint32_t kMaxTerms = 1000;

    // term <- beta^k A^k, accumulated into scores row by row.
    std::size_t nn = static_cast<std::size_t>(n) * n;
    std::vector<double> term(nn, 0.0), next(nn, 0.0), scores(nn, 0.0);
    for (std::uint32_t i = 0; i < n; ++i)
        for (const auto& e : g.neighbors(i)) term[static_cast<std::size_t>(i) * n + e.to] = b * e.weight;
    for (std::size_t k = 0; k < nn; ++k) scores[k] = term[k];

    for (std::uint32_t p = 2; p <= kMaxTerms; ++p) {
        // Row-parallel product; each row accumulates sequentially, so the
        // result is bitwise identical for any thread count.
#pragma omp parallel for schedule(static)
        for (std::uint32_t i = 0; i < n; ++i) {
            double* dst = next.data() + static_cast<std::size_t>(i) * n;
            for (std::uint32_t j = 0; j < n; ++j) dst[j] = 0.0;
            for (const auto& e : g.neighbors(i)) {
                const double w = b * e.weight;
                const double* src = term.data() + static_cast<std::size_t>(e.to) * n;
                for (std::uint32_t j = 0; j < n; ++j) dst[j] += w * src[j];
            }
        }
        term.swap(next);
        double max_abs = 0;
        for (std::size_t k = 0; k < nn; ++k) {
            scores[k] += term[k];
            max_abs = std::max(max_abs, std::fabs(term[k]));
        }
        if (max_abs < kTermTolerance) break;
    }

    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            out.set(i, j, scores[static_cast<std::size_t>(i) * n + j]);
    out.set_katz_params(b, lambda1);
    return out;
}

} // namespace netcf
