#include "cogcap/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cogcap/detail/rng.hpp"
#include "cogcap/errors.hpp"

namespace cogcap {

void PowerPolicy::validate() const {
    if (!(std::isfinite(p1_bar) && p1_bar >= 0.0))
        throw ConfigError("PowerPolicy: p1_bar must be nonnegative");
    if (!(std::isfinite(p2_bar) && p2_bar >= 0.0))
        throw ConfigError("PowerPolicy: p2_bar must be nonnegative");
    if (!(std::isfinite(p_peak) && p_peak > 0.0))
        throw ConfigError("PowerPolicy: p_peak must be positive");
    if (p1_bar > p_peak || p2_bar > p_peak)
        throw ConfigError("PowerPolicy: powers must respect the peak cap");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("PowerPolicy: eta must lie in (0,1)");
}

double avg_power_slack(const PowerPolicy& policy, double p_d) {
    return policy.p_avg - (p_d * policy.p1_bar + (1.0 - p_d) * policy.p2_bar);
}

namespace estimation {

TrainingPowers pilot_and_data_powers(const PowerPolicy& policy, const SystemParams& params) {
    const double m = params.data_symbols();
    if (m < 1.0) throw ConfigError("pilot_and_data_powers: need at least one data symbol");
    TrainingPowers tp;
    tp.p_tb = policy.eta * policy.p1_bar * params.T;
    tp.p_ti = policy.eta * policy.p2_bar * params.T;
    tp.p_db = (policy.p1_bar * params.T - tp.p_tb) / m;
    tp.p_di = (policy.p2_bar * params.T - tp.p_ti) / m;
    return tp;
}

NoisePriors noise_priors(bool detected_busy, double p_d, double p_f, double a, double b) {
    if (!(p_d >= 0.0 && p_d <= 1.0 && p_f >= 0.0 && p_f <= 1.0))
        throw std::domain_error("noise_priors: p_d, p_f must lie in [0,1]");
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
        throw std::domain_error("noise_priors: a, b must lie in (0,1)");

    // Stationary occupancy of the two-state chain: idle with probability
    // a/(a+b), busy with b/(a+b); Bayes against the detector's error rates.
    const double idle_term = detected_busy ? a * p_f : a * (1.0 - p_f);
    const double busy_term = detected_busy ? b * p_d : b * (1.0 - p_d);
    const double denom = idle_term + busy_term;
    if (denom <= 0.0)
        throw DegenerateInput("noise_priors: sensing decision has zero probability");
    return {idle_term / denom, busy_term / denom};
}

double mismatched_coefficient(double pilot_power, bool detected_busy, const SystemParams& params) {
    if (!(std::isfinite(pilot_power) && pilot_power >= 0.0))
        throw std::domain_error("mismatched_coefficient: pilot power must be nonnegative");
    const double assumed_noise = params.sigma_n2 + (detected_busy ? params.sigma_s2 : 0.0);
    return std::sqrt(pilot_power) * params.sigma_h2 /
           (pilot_power * params.sigma_h2 + assumed_noise);
}

namespace {

void check_priors(const NoisePriors& priors) {
    if (!(priors.p_noise_only >= 0.0 && priors.p_noise_plus_signal >= 0.0 &&
          std::abs(priors.p_noise_only + priors.p_noise_plus_signal - 1.0) < 1e-9))
        throw std::domain_error("priors must be nonnegative and sum to 1");
}

}  // namespace

double linear_mmse_coefficient(double pilot_power, const NoisePriors& priors,
                               const SystemParams& params) {
    if (!(std::isfinite(pilot_power) && pilot_power >= 0.0))
        throw std::domain_error("linear_mmse_coefficient: pilot power must be nonnegative");
    check_priors(priors);
    const double v_idle = pilot_power * params.sigma_h2 + params.sigma_n2;
    const double v_busy = v_idle + params.sigma_s2;
    const double mean_obs_power =
        priors.p_noise_only * v_idle + priors.p_noise_plus_signal * v_busy;
    return std::sqrt(pilot_power) * params.sigma_h2 / mean_obs_power;
}

std::complex<double> true_mmse_estimate(std::complex<double> y, double pilot_power,
                                        const NoisePriors& priors, const SystemParams& params) {
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag()))
        throw std::domain_error("true_mmse_estimate: observation must be finite");
    check_priors(priors);
    const double v_idle = pilot_power * params.sigma_h2 + params.sigma_n2;
    const double v_busy = v_idle + params.sigma_s2;
    const double y2 = std::norm(y);

    // Posterior over the noise variance, computed in log space.
    const double l_idle = -y2 / v_idle - std::log(v_idle);
    const double l_busy = -y2 / v_busy - std::log(v_busy);
    const double top = std::max(l_idle, l_busy);
    const double w_idle = priors.p_noise_only * std::exp(l_idle - top);
    const double w_busy = priors.p_noise_plus_signal * std::exp(l_busy - top);
    const double post_idle = w_idle / (w_idle + w_busy);
    const double post_busy = 1.0 - post_idle;

    const double k_idle = std::sqrt(pilot_power) * params.sigma_h2 / v_idle;
    const double k_busy = std::sqrt(pilot_power) * params.sigma_h2 / v_busy;
    return (post_idle * k_idle + post_busy * k_busy) * y;
}

EstimationStats estimation_stats(EstimatorKind kind, int scenario, const TrainingPowers& powers,
                                 const NoisePriors& priors, const SystemParams& params) {
    if (scenario < 1 || scenario > 4)
        throw std::domain_error("estimation_stats: scenario must lie in 1..4");
    if (kind == EstimatorKind::TrueMMSE)
        throw UnsupportedCombination(
            "estimation_stats: true MMSE has no closed-form variances; "
            "use true_mmse_stats_monte_carlo");

    const bool detected_busy = scenario_detected_busy(scenario);
    const double p_t = detected_busy ? powers.p_tb : powers.p_ti;
    const double true_noise =
        params.sigma_n2 + (scenario_is_busy(scenario) ? params.sigma_s2 : 0.0);
    const double obs_power = p_t * params.sigma_h2 + true_noise;

    const double k = kind == EstimatorKind::MismatchedMMSE
                         ? mismatched_coefficient(p_t, detected_busy, params)
                         : linear_mmse_coefficient(p_t, priors, params);

    EstimationStats stats;
    stats.k = k;
    stats.sigma_hhat2 = k * k * obs_power;
    stats.sigma_htilde2 =
        (1.0 - 2.0 * k * std::sqrt(p_t)) * params.sigma_h2 + stats.sigma_hhat2;
    return stats;
}

EstimationStats true_mmse_stats_monte_carlo(int scenario, const TrainingPowers& powers,
                                            const NoisePriors& priors, const SystemParams& params,
                                            std::uint64_t n_samples, std::uint64_t seed) {
    if (scenario < 1 || scenario > 4)
        throw std::domain_error("true_mmse_stats_monte_carlo: scenario must lie in 1..4");
    if (n_samples == 0)
        throw std::domain_error("true_mmse_stats_monte_carlo: need at least one sample");

    const bool busy = scenario_is_busy(scenario);
    const double p_t = scenario_detected_busy(scenario) ? powers.p_tb : powers.p_ti;
    const double amp = std::sqrt(p_t);

    detail::Stream fading(seed, 0xFAD0 + scenario);
    detail::Stream noise(seed, 0x0150 + scenario);

    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        std::complex<double> y = amp * fading.complex_gaussian(params.sigma_h2) +
                                 noise.complex_gaussian(params.sigma_n2);
        if (busy) y += noise.complex_gaussian(params.sigma_s2);
        sum_sq += std::norm(true_mmse_estimate(y, p_t, priors, params));
    }

    EstimationStats stats;
    stats.k = 0.0;  // no single coefficient; the estimate is a nonlinear map of y
    stats.sigma_hhat2 = std::min(sum_sq / static_cast<double>(n_samples), params.sigma_h2);
    stats.sigma_htilde2 = params.sigma_h2 - stats.sigma_hhat2;
    return stats;
}

}  // namespace estimation
}  // namespace cogcap
