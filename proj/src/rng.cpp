#include "ars/rng.hpp"

#include "ars/special_functions.hpp"

namespace ars {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t replicate, std::uint32_t role) {
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    stream_hi_ = replicate ^ (static_cast<std::uint64_t>(role) << 48);
}

std::array<std::uint32_t, 4> PhiloxStream::block(std::uint64_t index) const {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(stream_hi_), static_cast<std::uint32_t>(stream_hi_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, key);
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

std::uint64_t PhiloxStream::next_u64() {
    if (have_cached_) {
        have_cached_ = false;
        return (static_cast<std::uint64_t>(cached_[2]) << 32) | cached_[3];
    }
    cached_ = block(draw_++);
    have_cached_ = true;
    return (static_cast<std::uint64_t>(cached_[0]) << 32) | cached_[1];
}

double PhiloxStream::next_double() {
    // 53 significant bits, shifted off the exact endpoints.
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double PhiloxStream::next_normal() { return inv_norm_cdf(next_double()); }

}  // namespace ars
