#pragma once

#include <cmath>
#include <cstdint>

namespace crossing {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: draw i is mix64(key + i·golden). Substreams are keyed by
/// (seed, index), so chunked simulation reproduces exactly for any thread count.
class Stream {
public:
    constexpr explicit Stream(std::uint64_t key) noexcept : key_(key) {}

    static constexpr Stream substream(std::uint64_t seed, std::uint64_t index) noexcept {
        return Stream(mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ULL)));
    }

    constexpr std::uint64_t next() noexcept { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace crossing
