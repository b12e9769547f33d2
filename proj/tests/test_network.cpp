#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "errors.hpp"
#include "helpers.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "rng.hpp"

using namespace netcf;

namespace {

SimilarityMatrix sim_from_dense(const oracle::Dense& adj) {
    auto n = static_cast<std::uint32_t>(adj.size());
    SimilarityMatrix s(Axis::user, n, "pcc");
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (adj[i][j] != 0.0) s.set(i, j, adj[i][j]);
    return s;
}

oracle::Dense dense_from_network(const Network& g) {
    oracle::Dense adj(g.size(), std::vector<double>(g.size(), 0.0));
    for (std::uint32_t i = 0; i < g.size(); ++i)
        for (const auto& e : g.neighbors(i)) adj[i][e.to] = e.weight;
    return adj;
}

/// Random symmetric weighted graph; weights in [-1,1] excluding a dead zone
/// around 0, edge probability `p`.
oracle::Dense random_graph(std::uint32_t n, double p, std::uint64_t seed,
                           bool signed_weights = true) {
    Rng rng(seed);
    oracle::Dense adj(n, std::vector<double>(n, 0.0));
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (rng.unit() < p) {
                double w = 0.1 + 0.9 * rng.unit();
                if (signed_weights && rng.unit() < 0.35) w = -w;
                adj[i][j] = adj[j][i] = w;
            }
    return adj;
}

} // namespace

TEST_CASE("network construction from similarity") {
    SimilarityMatrix s(Axis::user, 3, "pcc");
    s.set(0, 1, 0.5);
    s.set(1, 2, 0.0); // defined zero: no edge
    // (0,2) left undefined: no edge
    auto g = Network::from_similarity(s);
    CHECK(g.size() == 3);
    CHECK(g.edge_count() == 1);
    CHECK(g.degree(0) == 1);
    CHECK(g.degree(1) == 1);
    CHECK(g.degree(2) == 0);
    CHECK(g.neighbors(0)[0].to == 1);
    CHECK(g.neighbors(0)[0].weight == 0.5);

    SUBCASE("all-undefined similarity gives an edgeless network") {
        SimilarityMatrix empty(Axis::user, 4, "pcc");
        auto eg = Network::from_similarity(empty);
        CHECK(eg.edge_count() == 0);
    }
    SUBCASE("negative weights are edges") {
        SimilarityMatrix neg(Axis::user, 2, "pcc");
        neg.set(0, 1, -0.7);
        auto ng = Network::from_similarity(neg);
        CHECK(ng.edge_count() == 1);
        CHECK(ng.neighbors(0)[0].weight == -0.7);
    }
    SUBCASE("edge list export") {
        testutil::TempDir tmp("edges");
        auto path = tmp.path("g.csv");
        g.export_edge_csv(path);
        CHECK(testutil::read_file(path) == "i,j,weight\n0,1,0.5\n");
    }
}

TEST_CASE("common neighbors") {
    SUBCASE("triangle: every pair shares the remaining node") {
        oracle::Dense tri = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
        auto g = Network::from_similarity(sim_from_dense(tri));
        auto cn = common_neighbors(g);
        for (std::uint32_t i = 0; i < 3; ++i)
            for (std::uint32_t j = 0; j < 3; ++j) CHECK(cn.get(i, j) == (i == j ? 0.0 : 1.0));
    }
    SUBCASE("star: leaves share the center, center shares nothing") {
        oracle::Dense star(5, std::vector<double>(5, 0.0));
        for (int leaf = 1; leaf < 5; ++leaf) star[0][leaf] = star[leaf][0] = 1.0;
        auto g = Network::from_similarity(sim_from_dense(star));
        auto cn = common_neighbors(g);
        for (std::uint32_t a = 1; a < 5; ++a) {
            CHECK(cn.get(0, a) == 0.0);
            for (std::uint32_t b = a + 1; b < 5; ++b) CHECK(cn.get(a, b) == 1.0);
        }
    }
    SUBCASE("random graphs match the set oracle and the squared binarized adjacency") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto adj = random_graph(6, 0.5, seed);
            auto g = Network::from_similarity(sim_from_dense(adj));
            auto cn = common_neighbors(g);
            auto expect = oracle::cn_scores(adj);
            int n = 6;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    CHECK(cn.get(i, j) == expect[i][j]);
                    // [B^2]_ij for the 0/1 adjacency B
                    double b2 = 0;
                    for (int k = 0; k < n; ++k)
                        b2 += (adj[i][k] != 0.0 ? 1.0 : 0.0) * (adj[k][j] != 0.0 ? 1.0 : 0.0);
                    CHECK(cn.get(i, j) == b2);
                }
        }
    }
    SUBCASE("adding an edge never decreases a score") {
        auto adj = random_graph(7, 0.4, 99);
        auto before = common_neighbors(Network::from_similarity(sim_from_dense(adj)));
        // add the first missing edge
        for (int i = 0; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j)
                if (adj[i][j] == 0.0) {
                    adj[i][j] = adj[j][i] = 0.5;
                    goto added;
                }
    added:
        auto after = common_neighbors(Network::from_similarity(sim_from_dense(adj)));
        for (std::uint32_t i = 0; i < 7; ++i)
            for (std::uint32_t j = i + 1; j < 7; ++j) CHECK(after.get(i, j) >= before.get(i, j));
    }
}

TEST_CASE("network jaccard") {
    SUBCASE("identical neighborhoods score one") {
        // nodes 0 and 1 both connect exactly to 2 and 3
        oracle::Dense adj(4, std::vector<double>(4, 0.0));
        adj[0][2] = adj[2][0] = 1;
        adj[0][3] = adj[3][0] = 1;
        adj[1][2] = adj[2][1] = 1;
        adj[1][3] = adj[3][1] = 1;
        auto j = jaccard_network(Network::from_similarity(sim_from_dense(adj)));
        CHECK(j.get(0, 1) == 1.0);
    }
    SUBCASE("disjoint neighborhoods score zero") {
        oracle::Dense adj(4, std::vector<double>(4, 0.0));
        adj[0][2] = adj[2][0] = 1;
        adj[1][3] = adj[3][1] = 1;
        auto j = jaccard_network(Network::from_similarity(sim_from_dense(adj)));
        CHECK(j.get(0, 1) == 0.0);
    }
    SUBCASE("empty union scores zero, not undefined") {
        SimilarityMatrix s(Axis::user, 3, "pcc");
        s.set(0, 1, 1.0);
        auto j = jaccard_network(Network::from_similarity(s));
        CHECK(j.get(0, 2) == 0.0); // node 2 isolated
    }
    SUBCASE("random graphs match the set oracle") {
        for (std::uint64_t seed = 11; seed <= 14; ++seed) {
            auto adj = random_graph(6, 0.5, seed);
            auto j = jaccard_network(Network::from_similarity(sim_from_dense(adj)));
            auto expect = oracle::jaccard_scores(adj);
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    if (a != b) CHECK(j.get(a, b) == doctest::Approx(expect[a][b]).epsilon(1e-12));
        }
    }
}

TEST_CASE("spectral radius") {
    SUBCASE("complete graph with unit weights") {
        for (std::uint32_t n : {3u, 5u, 8u}) {
            oracle::Dense adj(n, std::vector<double>(n, 1.0));
            for (std::uint32_t i = 0; i < n; ++i) adj[i][i] = 0.0;
            auto g = Network::from_similarity(sim_from_dense(adj));
            CHECK(spectral_radius(g) == doctest::Approx(n - 1.0).epsilon(1e-7));
        }
    }
    SUBCASE("single edge of weight w has radius |w|") {
        SimilarityMatrix s(Axis::user, 2, "pcc");
        s.set(0, 1, -2.5);
        auto g = Network::from_similarity(s);
        CHECK(spectral_radius(g) == doctest::Approx(2.5).epsilon(1e-8));
    }
    SUBCASE("matches the dense eigensolver on random symmetric matrices") {
        for (std::uint64_t seed = 21; seed <= 28; ++seed) {
            auto adj = random_graph(8, 0.6, seed);
            auto g = Network::from_similarity(sim_from_dense(adj));
            if (g.edge_count() == 0) continue;
            double expect = oracle::spectral_radius_dense(adj);
            CHECK(spectral_radius(g) == doctest::Approx(expect).epsilon(1e-6));
        }
    }
    SUBCASE("edgeless network is rejected") {
        SimilarityMatrix s(Axis::user, 3, "pcc");
        CHECK_THROWS_AS(spectral_radius(Network::from_similarity(s)), DomainError);
    }
    SUBCASE("hitting the iteration cap raises an error carrying diagnostics") {
        auto adj = random_graph(10, 0.5, 3);
        auto g = Network::from_similarity(sim_from_dense(adj));
        REQUIRE(g.edge_count() > 0);
        PowerIterationOptions opts;
        opts.max_iterations = 2; // below the minimum iterations needed
        try {
            spectral_radius(g, opts);
            FAIL("expected ConvergenceError");
        } catch (const ConvergenceError& e) {
            CHECK(e.last_estimate() > 0.0);
            CHECK(e.residual() >= 0.0);
        }
    }
}

TEST_CASE("katz") {
    SUBCASE("two nodes, unit edge, beta 0.5 sums to 2/3") {
        SimilarityMatrix s(Axis::user, 2, "pcc");
        s.set(0, 1, 1.0);
        auto g = Network::from_similarity(s);
        auto k = katz(g, 0.5);
        CHECK(k.get(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
        CHECK(k.beta() == 0.5);
    }
    SUBCASE("edgeless graph scores all zero") {
        SimilarityMatrix s(Axis::user, 4, "pcc");
        auto k = katz(Network::from_similarity(s));
        for (std::uint32_t i = 0; i < 4; ++i)
            for (std::uint32_t j = 0; j < 4; ++j) CHECK(k.get(i, j) == 0.0);
    }
    SUBCASE("explicit beta at or past 1/lambda_1 diverges") {
        SimilarityMatrix s(Axis::user, 2, "pcc");
        s.set(0, 1, 2.0); // lambda_1 = 2
        auto g = Network::from_similarity(s);
        CHECK_THROWS_AS(katz(g, 0.5), DomainError);
        CHECK_THROWS_AS(katz(g, 0.7), DomainError);
        CHECK_NOTHROW(katz(g, 0.49));
    }
    SUBCASE("auto beta is 0.85 over the spectral radius") {
        auto adj = random_graph(6, 0.6, 5, false);
        auto g = Network::from_similarity(sim_from_dense(adj));
        auto k = katz(g);
        CHECK(k.beta() == doctest::Approx(0.85 / k.lambda1()).epsilon(1e-12));
        CHECK(k.lambda1() == doctest::Approx(spectral_radius(g)).epsilon(1e-10));
    }
    SUBCASE("truncated series matches the closed form on random graphs") {
        for (std::uint64_t seed = 31; seed <= 36; ++seed) {
            auto adj = random_graph(24, 0.25, seed);
            auto g = Network::from_similarity(sim_from_dense(adj));
            if (g.edge_count() == 0) continue;
            auto k = katz(g);
            auto expect = oracle::katz_closed_form(dense_from_network(g), k.beta());
            for (std::uint32_t i = 0; i < g.size(); ++i)
                for (std::uint32_t j = 0; j < g.size(); ++j) {
                    if (i == j) continue;
                    CHECK(k.get(i, j) == doctest::Approx(expect[i][j]).epsilon(1e-8));
                }
        }
    }
    SUBCASE("tiny beta ranks non-adjacent pairs like common neighbors") {
        auto adj = random_graph(8, 0.45, 77, false);
        for (auto& row : adj)
            for (auto& w : row)
                if (w != 0.0) w = 1.0; // the ranking claim needs unit weights
        auto g = Network::from_similarity(sim_from_dense(adj));
        REQUIRE(g.edge_count() > 0);
        double lambda = spectral_radius(g);
        auto k = katz(g, 1e-3 / lambda);
        auto cn = common_neighbors(g);
        for (std::uint32_t a = 0; a < 8; ++a)
            for (std::uint32_t b = a + 1; b < 8; ++b)
                for (std::uint32_t c = 0; c < 8; ++c)
                    for (std::uint32_t d = c + 1; d < 8; ++d) {
                        if (adj[a][b] != 0.0 || adj[c][d] != 0.0) continue;
                        if (cn.get(a, b) > cn.get(c, d)) CHECK(k.get(a, b) > k.get(c, d));
                    }
    }
    SUBCASE("structural scores are symmetric with zero diagonal") {
        auto adj = random_graph(7, 0.5, 41);
        auto g = Network::from_similarity(sim_from_dense(adj));
        std::vector<StructuralSimilarity> kinds;
        kinds.push_back(common_neighbors(g));
        kinds.push_back(jaccard_network(g));
        for (const auto& ss : kinds) {
            for (std::uint32_t i = 0; i < 7; ++i) {
                CHECK(ss.get(i, i) == 0.0);
                for (std::uint32_t j = 0; j < 7; ++j) CHECK(ss.get(i, j) == ss.get(j, i));
            }
        }
    }
}

TEST_CASE("structural similarity exposed as a similarity matrix") {
    auto adj = random_graph(6, 0.5, 55);
    auto g = Network::from_similarity(sim_from_dense(adj));
    auto k = katz(g);
    auto s = k.to_similarity("net-katz", g.content_hash());
    CHECK(s.measure_tag() == "net-katz");
    CHECK(s.meta().present);
    CHECK(s.meta().beta == k.beta());
    CHECK(s.meta().network_hash == g.content_hash());
    for (std::uint32_t i = 0; i < 6; ++i) {
        CHECK_FALSE(s.defined(i, i));
        for (std::uint32_t j = 0; j < 6; ++j)
            if (i != j) CHECK(*s.get(i, j) == k.get(i, j));
    }
}
