#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace cogcap::detail {

/// splitmix64 mix step; used to derive independent per-component stream seeds
/// from one master seed so that changing one component's draws leaves the
/// other components' sequences untouched.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// One named random stream. Transforms are hand-rolled on top of the
/// engine's raw 64-bit output so sequences are identical across platforms.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (stream_id + 1));
        const std::uint64_t lo = splitmix64(s);
        const std::uint64_t hi = splitmix64(s);
        engine_.seed(lo ^ (hi << 1));
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Exponential with the given mean.
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    /// Circularly symmetric complex Gaussian with E{|z|^2} = variance.
    std::complex<double> complex_gaussian(double variance) {
        const double amp = std::sqrt(exponential(variance));
        const double phase = 2.0 * std::numbers::pi * uniform();
        return {amp * std::cos(phase), amp * std::sin(phase)};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace cogcap::detail
