#pragma once

#include <array>

#include "cogcap/estimation.hpp"
#include "cogcap/numerics.hpp"
#include "cogcap/params.hpp"
#include "cogcap/sensing.hpp"

namespace cogcap {

/// Fixed transmission rates in bits/second, keyed by the sensing decision:
/// r1 when detected busy (scenarios 1 and 3), r2 when detected idle (2 and 4).
struct RatePolicy {
    double r1;
    double r2;
};

/// Effective post-estimation SNR of each scenario, treating the estimation
/// error as worst-case Gaussian noise.
struct ScenarioSnrs {
    std::array<double, 4> snr;  ///< index k-1 holds SNR_k
};

/// The two distinct rows of the rank-2 8x8 transition matrix, plus the
/// ON/OFF thresholds behind them. States 1-4 have a busy channel, 5-8 an
/// idle one; odd states are ON, even states OFF.
struct TransitionModel {
    std::array<double, 8> p_b;     ///< row for busy-origin states (rows 1-4 of R)
    std::array<double, 8> p_i;     ///< row for idle-origin states (rows 5-8 of R)
    std::array<double, 4> alphas;  ///< alpha_1..alpha_4

    /// Assembles the full 8x8 matrix: rows 1-4 copy p_b, rows 5-8 copy p_i.
    numerics::Matrix8 to_matrix() const;
};

namespace statemodel {

/// Estimate/error statistics for all four scenarios with scenario-consistent
/// priors (busy-decision priors for scenarios 1,3; idle for 2,4).
std::array<EstimationStats, 4> all_scenario_stats(const PowerPolicy& policy, EstimatorKind kind,
                                                  const SensingOperatingPoint& sensing,
                                                  const SystemParams& params);

/// SNR_k from precomputed per-scenario statistics: data power over
/// (error power + noise), with the primary signal present in scenarios 1-2.
ScenarioSnrs snrs_from_stats(const std::array<EstimationStats, 4>& stats,
                             const TrainingPowers& powers, const SystemParams& params);

/// Full analytic path: powers, priors, statistics, SNRs. Propagates
/// UnsupportedCombination for the true MMSE estimator.
ScenarioSnrs scenario_snrs(const PowerPolicy& policy, EstimatorKind kind,
                           const SensingOperatingPoint& sensing, const SystemParams& params);

/// Outage thresholds alpha_k = (2^(r T / ((T-N)B-1)) - 1) / SNR_k with r = r1
/// for scenarios 1,3 and r2 for 2,4. A zero SNR with a positive rate yields
/// +infinity (state never ON); a zero rate yields 0 (always ON).
std::array<double, 4> rate_thresholds(const RatePolicy& rates, const ScenarioSnrs& snrs,
                                      const SystemParams& params);

/// Pr{z > alpha} for the unit-mean exponential fading-power surrogate z.
double on_probability(double alpha);

/// Builds the two transition rows from the sensing point, the thresholds and
/// the Markov activity parameters. Each row sums to 1 by construction.
TransitionModel transition_rows(const SensingOperatingPoint& sensing,
                                const std::array<double, 4>& alphas, const SystemParams& params);

}  // namespace statemodel
}  // namespace cogcap
