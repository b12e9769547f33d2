#ifndef NETCF_RNG_HPP
#define NETCF_RNG_HPP

#include <cstdint>
#include <vector>

namespace netcf {

/// Seedable 64-bit PRNG used for every randomized operation (splits, sparsify,
/// sampling, synthetic data). The generator is SplitMix64: state advances by
/// the golden-ratio increment 0x9E3779B97F4A7C15 and the output is mixed with
/// two xor-shift-multiply rounds. Bounded draws use rejection sampling, so the
/// sequence of results is reproducible across platforms and compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Unbiased uniform integer in [0, bound); bound must be > 0.
    /// Rejection on the top 2^64 mod bound values, then modulo.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound; // 2^64 mod bound
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (two fresh uniform draws per call).
    double gaussian();

    /// k distinct indices drawn uniformly from {0,...,n-1}, returned ascending.
    /// Partial Fisher-Yates over an index array; k is clamped to n.
    std::vector<std::uint32_t> sample(std::uint32_t n, std::uint32_t k);

    /// Derives an independent seed for a named sub-stream.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        Rng r(seed ^ (0xA0761D6478BD642FULL * (salt + 1)));
        return r.next();
    }

private:
    std::uint64_t state_;
};

} // namespace netcf

#endif
