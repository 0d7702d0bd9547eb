#pragma once

#include <array>

namespace cogcap::numerics {

/// Regularized lower incomplete gamma function P(shape, x) = gamma(shape, x) / Gamma(shape).
///
/// Monotone nondecreasing in x, P(shape, 0) = 0 and P -> 1 as x -> infinity.
/// Absolute error below 1e-12. Throws std::domain_error for shape <= 0 or
/// non-finite arguments.
double reg_lower_gamma(double shape, double x);

/// Inverse of reg_lower_gamma in its second argument: returns x such that
/// P(shape, x) = p. p = 0 maps to 0 and p = 1 to +infinity (sentinel).
/// Throws std::domain_error for p outside [0, 1].
double inv_reg_lower_gamma(double shape, double p);

using Matrix8 = std::array<std::array<double, 8>, 8>;

/// Spectral radius of an 8x8 nonnegative matrix to ~1e-12 relative accuracy.
///
/// Computes ||M^p||^(1/p) for p = 2^64 by repeated squaring with per-step
/// rescaling, which converges to the spectral radius without any eigenvalue
/// gap assumption. Throws std::domain_error on non-finite or negative entries.
double spectral_radius_generic(const Matrix8& m);

}  // namespace cogcap::numerics
