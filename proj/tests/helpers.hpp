#ifndef NETCF_TEST_HELPERS_HPP
#define NETCF_TEST_HELPERS_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rating_matrix.hpp"
#include "rng.hpp"

namespace testutil {

inline netcf::RatingMatrix make_matrix(std::uint32_t n_users, std::uint32_t n_items,
                                       const std::vector<netcf::RatingTriple>& triples,
                                       netcf::RatingDomain domain = {1, 5}) {
    return netcf::RatingMatrix::from_triples(n_users, n_items, triples, domain);
}

/// Random rating matrix: every cell rated with probability `density`,
/// values uniform in the domain.
inline netcf::RatingMatrix random_matrix(std::uint32_t n_users, std::uint32_t n_items,
                                         double density, std::uint64_t seed,
                                         netcf::RatingDomain domain = {1, 5}) {
    netcf::Rng rng(seed);
    std::vector<netcf::RatingTriple> triples;
    for (std::uint32_t u = 0; u < n_users; ++u)
        for (std::uint32_t i = 0; i < n_items; ++i)
            if (rng.unit() < density) {
                auto r = static_cast<double>(domain.lo + static_cast<int>(rng.below(
                                                             static_cast<std::uint64_t>(
                                                                 domain.hi - domain.lo + 1))));
                triples.push_back({u, i, r});
            }
    return make_matrix(n_users, n_items, triples, domain);
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        dir_ = std::filesystem::temp_directory_path() / ("netcf_test_" + tag);
        std::filesystem::remove_all(dir_);
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() { std::filesystem::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    std::filesystem::path dir_;
};

inline std::string write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
    return path;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace testutil

#endif
