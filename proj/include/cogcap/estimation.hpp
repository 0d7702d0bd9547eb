#pragma once

#include <complex>
#include <cstdint>

#include "cogcap/params.hpp"

namespace cogcap {

/// Average transmit powers keyed by the sensing decision, with the training
/// fraction and the caps they must respect.
struct PowerPolicy {
    double p1_bar;  ///< average power when the channel is detected busy (linear)
    double p2_bar;  ///< average power when the channel is detected idle (linear)
    double eta;     ///< fraction of the frame energy spent on the pilot symbol
    double p_avg;   ///< average-interference power cap (linear)
    double p_peak;  ///< peak average-power cap (linear)

    /// Checks the per-policy invariants (nonnegative powers under the peak
    /// cap, eta in (0,1)). The average-power constraint additionally needs a
    /// detection probability; see avg_power_slack().
    void validate() const;
};

/// Slack of the average-interference constraint
/// p_avg - (P_d * p1_bar + (1 - P_d) * p2_bar); nonnegative iff satisfied.
double avg_power_slack(const PowerPolicy& policy, double p_d);

/// Per-frame pilot and per-symbol data energies derived from a PowerPolicy.
struct TrainingPowers {
    double p_tb;  ///< pilot power when detected busy, eta * P1 * T
    double p_ti;  ///< pilot power when detected idle, eta * P2 * T
    double p_db;  ///< data-symbol power when detected busy
    double p_di;  ///< data-symbol power when detected idle
};

enum class EstimatorKind { MismatchedMMSE, LinearMMSE, TrueMMSE };

/// Prior probabilities of the two possible training-noise variances given the
/// sensing decision: sigma_n^2 alone (channel actually idle) or
/// sigma_n^2 + sigma_s^2 (channel actually busy).
struct NoisePriors {
    double p_noise_only;         ///< Pr{sigma^2 = sigma_n^2 | decision}
    double p_noise_plus_signal;  ///< Pr{sigma^2 = sigma_n^2 + sigma_s^2 | decision}
};

/// Second-order statistics of a channel estimate h_hat = K * y.
struct EstimationStats {
    double k;              ///< scalar estimator coefficient
    double sigma_hhat2;    ///< variance of the estimate
    double sigma_htilde2;  ///< variance of the estimation error
};

/// True state x sensing decision. Scenarios 1,2 have a busy channel; 1,3 a
/// busy detection.
inline bool scenario_is_busy(int scenario) { return scenario == 1 || scenario == 2; }
inline bool scenario_detected_busy(int scenario) { return scenario == 1 || scenario == 3; }

namespace estimation {

/// Splits each frame's energy budget into one pilot symbol and
/// (T-N)*B - 1 data symbols, per sensing decision.
TrainingPowers pilot_and_data_powers(const PowerPolicy& policy, const SystemParams& params);

/// Posterior probability of each noise variance given the sensing decision,
/// from the stationary Markov occupancy and the detector's (P_d, P_f).
/// Throws DegenerateInput when the decision has zero probability.
NoisePriors noise_priors(bool detected_busy, double p_d, double p_f, double a, double b);

/// MMSE coefficient computed as if the sensing decision were the truth.
double mismatched_coefficient(double pilot_power, bool detected_busy, const SystemParams& params);

/// Best linear coefficient under noise-variance uncertainty: the mismatched
/// numerator over the prior-weighted observation power.
double linear_mmse_coefficient(double pilot_power, const NoisePriors& priors,
                               const SystemParams& params);

/// Conditional-mean estimate under noise-variance uncertainty: the posterior
/// mixture of the two fixed-variance MMSE estimates given the observation y.
std::complex<double> true_mmse_estimate(std::complex<double> y, double pilot_power,
                                        const NoisePriors& priors, const SystemParams& params);

/// Closed-form estimate/error variances for one scenario. The scenario fixes
/// the observation statistics (true noise variance, pilot power); the sensing
/// decision behind `priors` fixes the coefficient. TrueMMSE has no closed
/// form and throws UnsupportedCombination here; use
/// true_mmse_stats_monte_carlo instead.
EstimationStats estimation_stats(EstimatorKind kind, int scenario, const TrainingPowers& powers,
                                 const NoisePriors& priors, const SystemParams& params);

/// Monte-Carlo pre-pass for the true MMSE estimator: estimates the variance
/// of the posterior-mixture estimate under the scenario's true observation
/// law and sets the error variance to sigma_h^2 - sigma_hhat^2.
EstimationStats true_mmse_stats_monte_carlo(int scenario, const TrainingPowers& powers,
                                            const NoisePriors& priors, const SystemParams& params,
                                            std::uint64_t n_samples, std::uint64_t seed);

}  // namespace estimation
}  // namespace cogcap
