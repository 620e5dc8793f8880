#pragma once

#include <array>
#include <cstdint>

namespace ars {

/// Counter-based stream generator (Philox 4x32, 10 rounds). A stream is
/// keyed by (seed, replicate, role); draws depend only on the key and the
/// draw index, so replicates are independent and order-insensitive no matter
/// how work is scheduled across threads.
class PhiloxStream {
  public:
    PhiloxStream(std::uint64_t seed, std::uint64_t replicate, std::uint32_t role);

    std::uint64_t next_u64();

    /// Uniform draw strictly inside (0,1).
    double next_double();

    /// Standard normal via inverse-CDF transform of one uniform.
    double next_normal();

  private:
    std::array<std::uint32_t, 4> block(std::uint64_t index) const;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_hi_ = 0;  // replicate ^ role, occupies counter lanes 2..3
    std::uint64_t draw_ = 0;
    std::array<std::uint32_t, 4> cached_{};
    bool have_cached_ = false;
};

}  // namespace ars
