#pragma once

#include <array>
#include <cstdint>

namespace gsv {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Stateless: the output is a pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Independent stream identified by (seed, sample index, purpose).
///
/// Every Monte Carlo sample owns its stream, so results do not depend on how
/// samples are distributed across threads.
class RandomStream {
public:
    enum class Purpose : std::uint32_t { gaussian = 0, bridge = 1, restart = 2 };

    RandomStream(std::uint64_t seed, std::uint64_t index, Purpose purpose = Purpose::gaussian) noexcept;

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Standard normal variate (Box-Muller, pairs cached).
    double normal() noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace gsv
