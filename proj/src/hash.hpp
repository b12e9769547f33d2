#ifndef NETCF_HASH_HPP
#define NETCF_HASH_HPP

#include <bit>
#include <cstdint>
#include <string_view>

namespace netcf {

/// Incremental FNV-1a (64-bit). Used for content hashes of matrices,
/// similarity caches and networks; the hash is embedded in reports so every
/// output is traceable to its inputs.
class Fnv1a {
public:
    void add_byte(std::uint8_t b) {
        h_ ^= b;
        h_ *= 0x100000001B3ULL;
    }
    void add_u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) add_byte(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void add_u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) add_byte(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void add_double(double d) { add_u64(std::bit_cast<std::uint64_t>(d)); }
    void add_string(std::string_view s) {
        for (char c : s) add_byte(static_cast<std::uint8_t>(c));
        add_byte(0);
    }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

} // namespace netcf

#endif
