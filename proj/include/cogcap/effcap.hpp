#pragma once

#include <array>

#include "cogcap/statemodel.hpp"

namespace cogcap {

/// Effective capacity of one (rates, powers, sensing) configuration.
struct EffCapResult {
    double value;        ///< bits/s/Hz
    double sp;           ///< spectral radius of phi(-theta) * R
    RatePolicy rates;    ///< rates the value was computed at
    PowerPolicy powers;  ///< powers the value was computed at
    double theta;        ///< QoS exponent used
};

namespace effcap {

/// Diagonal of the per-state moment generating functions:
/// ON states carry e^(theta T r), OFF states 1.
std::array<double, 8> mgf_diagonal(double theta, double T, const RatePolicy& rates);

/// Spectral radius of phi(theta) * R through the rank-2 closed form
/// (half-trace plus the square root of the discriminant of the 2x2 reduced
/// problem). Agrees with the generic eigensolver to ~1e-12.
double spectral_radius_closed(double theta, const TransitionModel& rows, const RatePolicy& rates,
                              double T);

/// Effective capacity -ln(sp(phi(-theta) R)) / (theta T B) in bits/s/Hz for
/// already-built transition rows; theta must be positive.
double effective_capacity(double theta, const TransitionModel& rows, const RatePolicy& rates,
                          double T, double B);

/// Full analytic pipeline: scenario SNRs, thresholds, transition rows, then
/// the closed-form spectral radius.
EffCapResult effective_capacity(double theta, const RatePolicy& rates, const PowerPolicy& powers,
                                const SensingOperatingPoint& sensing, EstimatorKind kind,
                                const SystemParams& params);

/// Long-run average service rate of the chain in bits/s/Hz, from the
/// two-point stationary fixed point of the rank-2 structure. This is the
/// theta -> 0 limit of the effective capacity.
double mean_service_rate(const TransitionModel& rows, const RatePolicy& rates, double T, double B);

}  // namespace effcap
}  // namespace cogcap
