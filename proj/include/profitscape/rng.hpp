#pragma once

#include <cmath>
#include <cstdint>

namespace profitscape {

// Every random draw in the library is a deterministic function of a
// (master, stream) pair. Stream-splitting rule used by the pipeline:
//   - realization i of an ensemble draws from stream i,
//   - the return-shuffle applied to realization i draws from
//     stream kShuffleStreamOffset + i.
// Parallel workers therefore never share generator state.
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;
};

inline constexpr std::uint64_t kShuffleStreamOffset = std::uint64_t{1} << 32;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// PCG64 (XSL-RR 128/64). The stream id selects the LCG increment, so
// distinct streams are distinct full-period sequences; that is what makes
// per-realization streams safe to advance concurrently.
class Pcg64 {
public:
    explicit Pcg64(Seed seed) {
        std::uint64_t ms = seed.master;
        std::uint64_t st = seed.stream ^ 0xda3e39cb94b95bdbULL;
        const u128 init_state = (u128(detail::splitmix64(ms)) << 64) | detail::splitmix64(ms);
        const u128 init_seq = (u128(detail::splitmix64(st)) << 64) | detail::splitmix64(st);
        state_ = 0;
        inc_ = (init_seq << 1) | 1u;
        step();
        state_ += init_state;
        step();
    }

    std::uint64_t next_u64() {
        step();
        const std::uint64_t xored = static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
        const unsigned rot = static_cast<unsigned>(state_ >> 122);
        return (xored >> rot) | (xored << ((64u - rot) & 63u));
    }

    // Uniform on the open interval (0, 1); safe under log().
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller. Two uniforms per draw, no cached spare,
    // so the draw count per call is fixed.
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Exponential with rate 1.
    double exponential() {
        return -std::log(uniform01());
    }

    // Unbiased integer in [0, n) by rejection; n must be > 0.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

private:
    using u128 = unsigned __int128;

    void step() {
        // PCG 128-bit default multiplier.
        constexpr u128 mult = (u128(0x2360ed051fc65da4ULL) << 64) | 0x4385df649fccf645ULL;
        state_ = state_ * mult + inc_;
    }

    u128 state_ = 0;
    u128 inc_ = 0;
};

}  // namespace profitscape
