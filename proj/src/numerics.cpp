#include "cogcap/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cogcap::numerics {

namespace {

constexpr int kMaxIter = 200;
constexpr double kTol = 1e-15;

// Lower-tail series: P(s,x) = x^s e^-x / Gamma(s+1) * sum_n x^n / ((s+1)...(s+n)).
// Converges fast for x < s + 1.
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    double ap = s;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kTol) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Upper-tail continued fraction (modified Lentz), good for x >= s + 1.
// Returns Q(s,x) = 1 - P(s,x).
double gamma_q_contfrac(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kTol) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double reg_lower_gamma(double shape, double x) {
    if (!std::isfinite(shape) || shape <= 0.0)
        throw std::domain_error("reg_lower_gamma: shape must be finite and positive");
    if (std::isnan(x) || x < 0.0)
        throw std::domain_error("reg_lower_gamma: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;

    double p;
    if (x < shape + 1.0) {
        p = gamma_p_series(shape, x);
    } else {
        p = 1.0 - gamma_q_contfrac(shape, x);
    }
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

double inv_reg_lower_gamma(double shape, double p) {
    if (!std::isfinite(shape) || shape <= 0.0)
        throw std::domain_error("inv_reg_lower_gamma: shape must be finite and positive");
    if (std::isnan(p) || p < 0.0 || p > 1.0)
        throw std::domain_error("inv_reg_lower_gamma: p must lie in [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    // Bracket the root, expanding the upper end until P(hi) >= p.
    double lo = 0.0;
    double hi = shape + 20.0 + 20.0 * std::sqrt(shape);
    for (int i = 0; i < 200 && reg_lower_gamma(shape, hi) < p; ++i) hi *= 2.0;

    // Bisection to relative interval width ~1e-13; P is monotone in x.
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (reg_lower_gamma(shape, mid) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1e-300, lo)) break;
    }
    return 0.5 * (lo + hi);
}

double spectral_radius_generic(const Matrix8& m) {
    for (const auto& row : m)
        for (double v : row) {
            if (!std::isfinite(v)) throw std::domain_error("spectral_radius_generic: non-finite entry");
            if (v < 0.0) throw std::domain_error("spectral_radius_generic: negative entry");
        }

    // ||M^p||_inf^(1/p) with p = 2^64 via scaled repeated squaring (Gelfand's
    // formula); exact to machine precision regardless of eigenvalue gaps.
    Matrix8 b = m;
    double logscale = 0.0;
    double power = 1.0;
    for (int iter = 0; iter < 64; ++iter) {
        double nrm = 0.0;
        for (const auto& row : b) {
            double s = 0.0;
            for (double v : row) s += v;
            nrm = std::max(nrm, s);
        }
        if (nrm == 0.0) return 0.0;

        Matrix8 sq{};
        const double inv = 1.0 / nrm;
        for (int i = 0; i < 8; ++i)
            for (int k = 0; k < 8; ++k) {
                const double bik = b[i][k] * inv;
                if (bik == 0.0) continue;
                for (int j = 0; j < 8; ++j) sq[i][j] += bik * b[k][j] * inv;
            }
        b = sq;
        logscale = 2.0 * (logscale + std::log(nrm));
        power *= 2.0;
    }

    double nrm = 0.0;
    for (const auto& row : b) {
        double s = 0.0;
        for (double v : row) s += v;
        nrm = std::max(nrm, s);
    }
    if (nrm == 0.0) return 0.0;
    return std::exp((logscale + std::log(nrm)) / power);
}

}  // namespace cogcap::numerics
