#pragma once

#include <span>
#include <vector>

#include "cogcap/params.hpp"

namespace cogcap {

/// An energy-detector threshold together with the (P_f, P_d) pair it induces.
struct SensingOperatingPoint {
    double lambda;  ///< detection threshold on the average received energy Y
    double p_f;     ///< false-alarm probability Pr{Y > lambda | idle}
    double p_d;     ///< detection probability Pr{Y > lambda | busy}
};

namespace sensing {

/// Pr{Y > lambda | channel idle}. Y averages NB squared-magnitude noise
/// samples, so the tail is a regularized-gamma upper tail with shape NB.
double false_alarm_prob(double lambda, const SystemParams& params);

/// Pr{Y > lambda | channel busy}; the noise-plus-signal variance replaces
/// the noise variance in the tail argument.
double detection_prob(double lambda, const SystemParams& params);

/// Threshold achieving a target detection probability, with the induced
/// false-alarm probability. target_pd must lie strictly inside (0,1).
SensingOperatingPoint operating_point_from_pd(double target_pd, const SystemParams& params);

/// Pointwise operating points over a strictly increasing P_d grid in (0,1).
std::vector<SensingOperatingPoint> roc_curve(std::span<const double> pd_grid,
                                             const SystemParams& params);

}  // namespace sensing
}  // namespace cogcap
