#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace lieforge {

/// xoshiro256** seeded through splitmix64, with Box-Muller normal deviates.
/// The algorithm is pinned so a (seed, draw order) pair reproduces the same
/// doubles on every platform with a correctly rounded libm.
class NormalRng {
public:
    static constexpr std::string_view kId = "xoshiro256ss-splitmix64-boxmuller/1";

    explicit NormalRng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
    std::uint64_t uniform_below(std::uint64_t bound);
    /// Standard normal. Deviates are produced in pairs; the sine branch of a
    /// pair is returned on the following call.
    double normal();

private:
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace lieforge
