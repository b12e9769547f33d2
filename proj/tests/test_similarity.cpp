#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "errors.hpp"
#include "helpers.hpp"
#include "oracle.hpp"
#include "similarity.hpp"

using namespace netcf;
using testutil::make_matrix;

namespace {

// Measure dispatch used by the oracle-agreement sweep.
double oracle_value(const std::string& name, const oracle::Grid& g, int a, int b) {
    if (name == "pcc") return oracle::pcc_corated(g, a, b);
    if (name == "cosine") return oracle::cosine(g, a, b);
    if (name == "cpcc") return oracle::cpcc(g, a, b);
    if (name == "jaccard-corated") return oracle::jaccard_corated(g, a, b);
    if (name == "pip") return oracle::pip(g, a, b);
    if (name == "nhsm") return oracle::nhsm(g, a, b);
    FAIL("unknown measure");
    return 0;
}

SimilarityMatrix compute(const std::string& name, const RatingMatrix& m, Axis axis) {
    if (name == "pcc") return pcc(m, axis);
    if (name == "cosine") return cosine(m, axis);
    if (name == "cpcc") return cpcc(m, axis);
    if (name == "jaccard-corated") return jaccard_corated(m, axis);
    if (name == "pip") return pip(m, axis);
    if (name == "nhsm") return nhsm(m, axis);
    FAIL("unknown measure");
    return {};
}

void check_matches_oracle(const SimilarityMatrix& s, const oracle::Grid& g,
                          const std::string& name) {
    for (std::uint32_t i = 0; i < s.size(); ++i)
        for (std::uint32_t j = i + 1; j < s.size(); ++j) {
            double expect = oracle_value(name, g, static_cast<int>(i), static_cast<int>(j));
            auto got = s.get(i, j);
            if (expect != expect) {
                CHECK_MESSAGE(!got.has_value(), name << " (" << i << "," << j << ")");
            } else {
                REQUIRE_MESSAGE(got.has_value(), name << " (" << i << "," << j << ")");
                CHECK(*got == doctest::Approx(expect).epsilon(1e-12));
            }
        }
}

} // namespace

TEST_CASE("pcc basics") {
    SUBCASE("identical non-constant co-ratings correlate perfectly") {
        auto m = make_matrix(2, 3, {{0, 0, 5}, {0, 1, 3}, {1, 0, 5}, {1, 1, 3}});
        auto s = pcc(m, Axis::user);
        CHECK(s.get(0, 1) == 1.0);
    }
    SUBCASE("no co-rated items is undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 5}, {1, 1, 3}});
        auto s = pcc(m, Axis::user);
        CHECK_FALSE(s.get(0, 1).has_value());
    }
    SUBCASE("a single co-rated item is undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 5}, {1, 0, 3}});
        CHECK_FALSE(pcc(m, Axis::user).get(0, 1).has_value());
    }
    SUBCASE("constant co-rated vector is undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 3}, {0, 1, 3}, {1, 0, 5}, {1, 1, 2}});
        CHECK_FALSE(pcc(m, Axis::user).get(0, 1).has_value());
    }
    SUBCASE("three co-rated items, hand value") {
        auto m = make_matrix(2, 3, {{0, 0, 5}, {0, 1, 3}, {0, 2, 4}, {1, 0, 4}, {1, 1, 1}, {1, 2, 2}});
        auto s = pcc(m, Axis::user);
        REQUIRE(s.get(0, 1).has_value());
        CHECK(*s.get(0, 1) == doctest::Approx(0.9819805060619655).epsilon(1e-12));
    }
    SUBCASE("diagonal is undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 5}, {1, 1, 3}});
        CHECK_FALSE(pcc(m, Axis::user).get(0, 0).has_value());
    }
    SUBCASE("global centering option") {
        auto m = testutil::random_matrix(8, 10, 0.6, 4);
        auto s = pcc(m, Axis::user, PccCentering::global);
        auto g = oracle::grid_from_matrix(m);
        for (std::uint32_t i = 0; i < 8; ++i)
            for (std::uint32_t j = i + 1; j < 8; ++j) {
                double expect = oracle::pcc_global(g, i, j);
                auto got = s.get(i, j);
                if (expect != expect) CHECK_FALSE(got.has_value());
                else CHECK(*got == doctest::Approx(expect).epsilon(1e-12));
            }
    }
}

TEST_CASE("cosine basics") {
    SUBCASE("identical vectors") {
        auto m = make_matrix(2, 2, {{0, 0, 4}, {0, 1, 2}, {1, 0, 4}, {1, 1, 2}});
        CHECK(*cosine(m, Axis::user).get(0, 1) == 1.0);
    }
    SUBCASE("disjoint supports score zero, not undefined") {
        auto m = make_matrix(2, 4, {{0, 0, 5}, {0, 1, 3}, {1, 2, 4}, {1, 3, 2}});
        auto s = cosine(m, Axis::user);
        REQUIRE(s.get(0, 1).has_value());
        CHECK(*s.get(0, 1) == 0.0);
    }
    SUBCASE("unrated entity is undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 5}});
        CHECK_FALSE(cosine(m, Axis::user).get(0, 1).has_value());
    }
    SUBCASE("partial overlap, hand value") {
        // u=(5,3,0), v=(4,0,2): 20 / (sqrt(34)*sqrt(20))
        auto m = make_matrix(2, 3, {{0, 0, 5}, {0, 1, 3}, {1, 0, 4}, {1, 2, 2}});
        CHECK(*cosine(m, Axis::user).get(0, 1) ==
              doctest::Approx(20.0 / std::sqrt(34.0 * 20.0)).epsilon(1e-12));
    }
}

TEST_CASE("adjusted cosine") {
    SUBCASE("user axis is unsupported") {
        auto m = make_matrix(2, 2, {{0, 0, 5}});
        CHECK_THROWS_AS(adjusted_cosine(m, Axis::user), DomainError);
    }
    SUBCASE("items sharing no raters are undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 5}, {1, 1, 3}});
        CHECK_FALSE(adjusted_cosine(m, Axis::item).get(0, 1).has_value());
    }
    SUBCASE("three raters with means 4,3,2 give anti-parallel centered vectors") {
        auto m = make_matrix(3, 2, {{0, 0, 5}, {0, 1, 3}, {1, 0, 4}, {1, 1, 2}, {2, 0, 3}, {2, 1, 1}});
        auto s = adjusted_cosine(m, Axis::item);
        REQUIRE(s.get(0, 1).has_value());
        CHECK(*s.get(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("parallel centered vectors score one") {
        auto m = make_matrix(2, 3,
                             {{0, 0, 5}, {0, 1, 5}, {0, 2, 1}, {1, 0, 4}, {1, 1, 4}, {1, 2, 1}});
        auto s = adjusted_cosine(m, Axis::item);
        REQUIRE(s.get(0, 1).has_value());
        CHECK(*s.get(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cpcc basics") {
    SUBCASE("identical non-median vectors score one") {
        auto m = make_matrix(2, 2, {{0, 0, 5}, {0, 1, 4}, {1, 0, 5}, {1, 1, 4}});
        CHECK(*cpcc(m, Axis::user).get(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("zero co-rated is undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 5}, {1, 1, 3}});
        CHECK_FALSE(cpcc(m, Axis::user).get(0, 1).has_value());
    }
    SUBCASE("all-median vectors are undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 3}, {0, 1, 3}, {1, 0, 3}, {1, 1, 3}});
        CHECK_FALSE(cpcc(m, Axis::user).get(0, 1).has_value());
    }
    SUBCASE("a single co-rated item is enough") {
        auto m = make_matrix(2, 1, {{0, 0, 5}, {1, 0, 4}});
        REQUIRE(cpcc(m, Axis::user).get(0, 1).has_value());
        CHECK(*cpcc(m, Axis::user).get(0, 1) == doctest::Approx(1.0));
    }
    SUBCASE("median-centered hand value") {
        auto m = make_matrix(2, 3, {{0, 0, 5}, {0, 1, 3}, {0, 2, 4}, {1, 0, 4}, {1, 1, 1}, {1, 2, 2}});
        CHECK(*cpcc(m, Axis::user).get(0, 1) ==
              doctest::Approx(0.1825741858350554).epsilon(1e-12));
    }
}

TEST_CASE("co-rated jaccard") {
    SUBCASE("identical rated sets") {
        auto m = make_matrix(2, 3, {{0, 0, 5}, {0, 1, 1}, {1, 0, 2}, {1, 1, 4}});
        CHECK(*jaccard_corated(m, Axis::user).get(0, 1) == 1.0);
    }
    SUBCASE("disjoint rated sets") {
        auto m = make_matrix(2, 2, {{0, 0, 5}, {1, 1, 3}});
        CHECK(*jaccard_corated(m, Axis::user).get(0, 1) == 0.0);
    }
    SUBCASE("sets {0,1,2} vs {1,2,3}") {
        auto m = make_matrix(2, 4,
                             {{0, 0, 5}, {0, 1, 3}, {0, 2, 4}, {1, 1, 2}, {1, 2, 5}, {1, 3, 1}});
        CHECK(*jaccard_corated(m, Axis::user).get(0, 1) == 0.5);
    }
    SUBCASE("both empty is undefined") {
        auto m = make_matrix(3, 2, {{2, 0, 4}, {2, 1, 2}});
        CHECK_FALSE(jaccard_corated(m, Axis::user).get(0, 1).has_value());
    }
}

TEST_CASE("pip") {
    SUBCASE("empty co-rated set is undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 5}, {1, 1, 3}});
        CHECK_FALSE(pip(m, Axis::user).get(0, 1).has_value());
    }
    SUBCASE("three co-rated pairs, hand factor products") {
        auto m = make_matrix(2, 3, {{0, 0, 5}, {0, 1, 3}, {0, 2, 4}, {1, 0, 4}, {1, 1, 1}, {1, 2, 2}});
        CHECK(*pip(m, Axis::user).get(0, 1) == doctest::Approx(537.25).epsilon(1e-12));
    }
    SUBCASE("single pair on the same median side equals its factor product") {
        // ratings 5 and 4: proximity (9-1)^2=64, impact (2+1)(1+1)=6,
        // popularity 1 (sides of the item mean 4.5 differ) -> 384
        auto m = make_matrix(2, 1, {{0, 0, 5}, {1, 0, 4}});
        CHECK(*pip(m, Axis::user).get(0, 1) == doctest::Approx(384.0).epsilon(1e-12));
    }
    SUBCASE("agreement scores strictly above the mirrored disagreement") {
        // (4,5) agree; (2,5) straddle the median and are penalized twice.
        auto agree = make_matrix(2, 1, {{0, 0, 4}, {1, 0, 5}});
        auto disagree = make_matrix(2, 1, {{0, 0, 2}, {1, 0, 5}});
        CHECK(*pip(agree, Axis::user).get(0, 1) > *pip(disagree, Axis::user).get(0, 1));
    }
}

TEST_CASE("nhsm") {
    SUBCASE("empty co-rated set is undefined") {
        auto m = make_matrix(2, 2, {{0, 0, 5}, {1, 1, 3}});
        CHECK_FALSE(nhsm(m, Axis::user).get(0, 1).has_value());
    }
    SUBCASE("identical twin is below one but maximal among the user's pairs") {
        auto m = make_matrix(4, 4,
                             {{0, 0, 5}, {0, 1, 2}, {0, 2, 4},
                              {1, 0, 5}, {1, 1, 2}, {1, 2, 4},   // twin of user 0
                              {2, 0, 3}, {2, 1, 3}, {2, 3, 1},
                              {3, 1, 5}, {3, 2, 1}});
        auto s = nhsm(m, Axis::user);
        REQUIRE(s.get(0, 1).has_value());
        CHECK(*s.get(0, 1) < 1.0);
        CHECK(*s.get(0, 1) > 0.0);
        for (std::uint32_t other = 2; other < 4; ++other) {
            if (!s.get(0, other)) continue;
            CHECK(*s.get(0, 1) > *s.get(0, other));
        }
    }
    SUBCASE("disagreement keeps the proximity factor inside (0,1)") {
        // NHSM's proximity for |r1-r2|=3 is sigmoid-shaped, no squared penalty.
        double proximity = 1.0 - 1.0 / (1.0 + std::exp(-3.0));
        CHECK(proximity > 0.0);
        CHECK(proximity < 1.0);
        auto m = make_matrix(2, 1, {{0, 0, 2}, {1, 0, 5}});
        auto s = nhsm(m, Axis::user);
        REQUIRE(s.get(0, 1).has_value());
        CHECK(*s.get(0, 1) > 0.0);
        CHECK(*s.get(0, 1) < 1.0);
    }
}

TEST_CASE("measures agree with the brute-force oracle on random matrices") {
    const char* names[] = {"pcc", "cosine", "cpcc", "jaccard-corated", "pip", "nhsm"};
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        double density = 0.25 + 0.1 * static_cast<double>(seed % 4);
        auto m = testutil::random_matrix(10, 12, density, seed * 101);
        auto gu = oracle::grid_from_matrix(m);
        auto gi = oracle::transpose(gu);
        for (const char* name : names) {
            check_matches_oracle(compute(name, m, Axis::user), gu, name);
            check_matches_oracle(compute(name, m, Axis::item), gi, name);
        }
        // adjusted cosine, item axis only
        auto s = adjusted_cosine(m, Axis::item);
        for (std::uint32_t i = 0; i < s.size(); ++i)
            for (std::uint32_t j = i + 1; j < s.size(); ++j) {
                double expect = oracle::adjusted_cosine_items(gu, i, j);
                auto got = s.get(i, j);
                if (expect != expect) CHECK_FALSE(got.has_value());
                else CHECK(*got == doctest::Approx(expect).epsilon(1e-12));
            }
    }
}

TEST_CASE("similarity invariants on random matrices") {
    auto m = testutil::random_matrix(12, 14, 0.45, 909);
    const char* names[] = {"pcc", "cosine", "cpcc", "jaccard-corated", "pip", "nhsm"};
    for (const char* name : names) {
        auto s = compute(name, m, Axis::user);
        for (std::uint32_t i = 0; i < s.size(); ++i)
            for (std::uint32_t j = 0; j < s.size(); ++j) {
                CHECK(s.defined(i, j) == s.defined(j, i));
                if (i == j) {
                    CHECK_FALSE(s.defined(i, j));
                    continue;
                }
                if (!s.defined(i, j)) continue;
                double v = *s.get(i, j);
                CHECK(v == *s.get(j, i)); // exact symmetry
                std::string n = name;
                if (n == "pcc" || n == "cpcc") {
                    CHECK(v >= -1.0);
                    CHECK(v <= 1.0);
                } else if (n == "cosine" || n == "jaccard-corated" || n == "nhsm") {
                    CHECK(v >= 0.0);
                    CHECK(v <= 1.0);
                } else {
                    CHECK(v >= 0.0); // pip is unbounded positive
                }
            }
    }
}

TEST_CASE("removing ratings never defines an undefined pcc pair") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto m = testutil::random_matrix(9, 11, 0.4, seed * 13);
        auto before = pcc(m, Axis::user);

        // Drop a random third of the ratings, dimensions unchanged.
        Rng rng(seed);
        std::vector<RatingTriple> kept;
        for (const auto& t : m.to_triples())
            if (rng.unit() > 1.0 / 3.0) kept.push_back(t);
        auto reduced = RatingMatrix::from_triples(m.n_users(), m.n_items(), kept, m.domain());
        auto after = pcc(reduced, Axis::user);

        CHECK(after.undefined_pairs() >= before.undefined_pairs());
        for (std::uint32_t i = 0; i < m.n_users(); ++i)
            for (std::uint32_t j = i + 1; j < m.n_users(); ++j)
                if (!before.defined(i, j)) CHECK_FALSE(after.defined(i, j));
    }
}

TEST_CASE("similarity csv export and binary cache") {
    testutil::TempDir tmp("simio");
    auto m = testutil::random_matrix(6, 8, 0.5, 3);
    auto s = pcc(m, Axis::user);

    SUBCASE("csv rows cover the upper triangle with NA for undefined") {
        auto path = tmp.path("s.csv");
        export_similarity_csv(s, path);
        auto text = testutil::read_file(path);
        CHECK(text.rfind("i,j,score\n", 0) == 0);
        std::size_t rows = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
        CHECK(rows == 6u * 5u / 2u);
    }
    SUBCASE("cache round-trips bit-exactly and validates its key") {
        auto path = tmp.path("s.bin");
        save_similarity_cache(s, m.content_hash(), path);
        auto loaded = load_similarity_cache(path, m.content_hash(), "pcc", Axis::user);
        REQUIRE(loaded.has_value());
        CHECK(loaded->content_hash() == s.content_hash());
        REQUIRE(loaded->storage().size() == s.storage().size());
        CHECK(std::memcmp(loaded->storage().data(), s.storage().data(),
                          s.storage().size() * sizeof(double)) == 0);
        CHECK_FALSE(load_similarity_cache(path, m.content_hash() + 1, "pcc", Axis::user).has_value());
        CHECK_FALSE(load_similarity_cache(path, m.content_hash(), "cosine", Axis::user).has_value());
        CHECK_FALSE(load_similarity_cache(path, m.content_hash(), "pcc", Axis::item).has_value());
        CHECK_FALSE(load_similarity_cache(tmp.path("missing.bin"), m.content_hash(), "pcc",
                                          Axis::user).has_value());
    }
}
