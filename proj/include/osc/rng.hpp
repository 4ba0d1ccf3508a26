#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace osc {

/// SplitMix64 finalizer; used to turn (seed + stream) into an engine seed.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for an independent stream: splitmix64(base + stream). Restart r of a
/// k-means run uses stream r; experiment run i uses stream i; theorem-lab
/// trial t uses stream t.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// Platform-independent generator. std::mt19937_64 output is fixed by the
/// standard; the distributions below are implemented here because the
/// std:: ones are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    static constexpr std::string_view name() { return "mt19937_64+splitmix64"; }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, n), n > 0, unbiased.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal (Marsaglia polar method).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace osc
