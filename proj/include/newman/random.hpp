// Platform-independent seeded random streams.
//
// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions do not, so the conversions to doubles and bounded integers
// are done here. Substream rule: the stream for (seed, index) is an
// mt19937_64 seeded with splitmix64(splitmix64(seed) ^ splitmix64(index + 1)),
// so any member of an ensemble can be generated without touching the others.

#pragma once

#include <cstdint>
#include <random>

namespace newman {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 1));
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
    RandomStream(std::uint64_t seed, std::uint64_t index) : engine_(substream_seed(seed, index)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [low, high).
    double uniform(double low, double high) { return low + (high - low) * uniform01(); }

    /// Uniform integer on the closed range [low, high] (rejection sampling, no modulo bias).
    std::int64_t uniform_int(std::int64_t low, std::int64_t high) {
        const std::uint64_t span = static_cast<std::uint64_t>(high - low) + 1;
        if (span == 0) return static_cast<std::int64_t>(engine_());
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return low + static_cast<std::int64_t>(r % span);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace newman
