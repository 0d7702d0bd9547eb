#pragma once

// Test-side oracles, independent of the library's numerical paths: adaptive
// quadrature, a std::random-based sampler and running-moment helpers.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 40) {
    const double m = 0.5 * (a + b);
    const double whole = simpson(f, a, b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, 0.5 * tol, depth - 1);
}

/// Sampler built on std:: distributions; intentionally a different code path
/// than the library's hand-rolled transforms.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return uniform_(engine_); }
    bool bernoulli(double p) { return uniform() < p; }
    double normal(double stddev) { return stddev * normal_(engine_); }
    double exponential(double mean) { return exp_(engine_) * mean; }

    /// Circularly symmetric complex Gaussian with E{|z|^2} = variance.
    std::complex<double> complex_gaussian(double variance) {
        const double s = std::sqrt(variance / 2.0);
        return {normal(s), normal(s)};
    }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::exponential_distribution<double> exp_{1.0};
};

/// Streaming mean / variance / standard error.
struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double std_error() const { return std::sqrt(variance() / static_cast<double>(n)); }
};

}  // namespace oracle
