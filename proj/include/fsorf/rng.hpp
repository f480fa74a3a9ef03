#pragma once

#include <cstdint>

namespace fsorf {

// xoshiro256** seeded through SplitMix64 from (seed, stream_index). Every
// variate below is built from this generator with fixed arithmetic, so a
// stream reproduces bit-for-bit on any platform with IEEE doubles and a
// correctly rounded libm for exp/log/sqrt.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    std::uint64_t next_u64();
    // uniform on the open interval (0,1)
    double uniform();
    double normal();
    // shape k > 0, unit scale
    double gamma(double shape);
    std::uint64_t poisson(double mean);

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t s_[4];
};

}  // namespace fsorf
