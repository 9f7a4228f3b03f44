#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pseudo_rl {

/// Seedable random stream. Wraps std::mt19937_64 (whose output sequence is fixed
/// by the standard) and derives every distribution itself, so a seed produces
/// the same stream with any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed), seed_value_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Requires n > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal via the Marsaglia polar method.
    double normal();

    /// Independent child stream keyed by name; does not advance this stream.
    Rng fork(std::string_view name) const;

    std::uint64_t seed() const noexcept { return seed_value_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_value_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

} // namespace pseudo_rl
