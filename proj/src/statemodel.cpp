#include "cogcap/statemodel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cogcap {

numerics::Matrix8 TransitionModel::to_matrix() const {
    numerics::Matrix8 m;
    for (int i = 0; i < 4; ++i) m[i] = p_b;
    for (int i = 4; i < 8; ++i) m[i] = p_i;
    return m;
}

namespace statemodel {

std::array<EstimationStats, 4> all_scenario_stats(const PowerPolicy& policy, EstimatorKind kind,
                                                  const SensingOperatingPoint& sensing,
                                                  const SystemParams& params) {
    const TrainingPowers powers = estimation::pilot_and_data_powers(policy, params);
    const NoisePriors busy_priors =
        estimation::noise_priors(true, sensing.p_d, sensing.p_f, params.a, params.b);
    const NoisePriors idle_priors =
        estimation::noise_priors(false, sensing.p_d, sensing.p_f, params.a, params.b);

    std::array<EstimationStats, 4> stats;
    for (int scenario = 1; scenario <= 4; ++scenario) {
        const NoisePriors& priors = scenario_detected_busy(scenario) ? busy_priors : idle_priors;
        stats[scenario - 1] = estimation::estimation_stats(kind, scenario, powers, priors, params);
    }
    return stats;
}

ScenarioSnrs snrs_from_stats(const std::array<EstimationStats, 4>& stats,
                             const TrainingPowers& powers, const SystemParams& params) {
    ScenarioSnrs out;
    for (int scenario = 1; scenario <= 4; ++scenario) {
        const EstimationStats& s = stats[scenario - 1];
        const double p_data = scenario_detected_busy(scenario) ? powers.p_db : powers.p_di;
        const double noise =
            params.sigma_n2 + (scenario_is_busy(scenario) ? params.sigma_s2 : 0.0);
        out.snr[scenario - 1] = p_data * s.sigma_hhat2 / (p_data * s.sigma_htilde2 + noise);
    }
    return out;
}

ScenarioSnrs scenario_snrs(const PowerPolicy& policy, EstimatorKind kind,
                           const SensingOperatingPoint& sensing, const SystemParams& params) {
    const auto stats = all_scenario_stats(policy, kind, sensing, params);
    return snrs_from_stats(stats, estimation::pilot_and_data_powers(policy, params), params);
}

std::array<double, 4> rate_thresholds(const RatePolicy& rates, const ScenarioSnrs& snrs,
                                      const SystemParams& params) {
    if (!(rates.r1 >= 0.0 && rates.r2 >= 0.0))
        throw std::domain_error("rate_thresholds: rates must be nonnegative");
    const double m = params.data_symbols();
    std::array<double, 4> alphas;
    for (int scenario = 1; scenario <= 4; ++scenario) {
        const double rate = scenario_detected_busy(scenario) ? rates.r1 : rates.r2;
        const double gap = std::exp2(rate * params.T / m) - 1.0;
        const double snr = snrs.snr[scenario - 1];
        double alpha;
        if (gap == 0.0)
            alpha = 0.0;  // zero rate is always achievable
        else if (snr <= 0.0)
            alpha = std::numeric_limits<double>::infinity();
        else
            alpha = gap / snr;
        alphas[scenario - 1] = alpha;
    }
    return alphas;
}

double on_probability(double alpha) {
    if (std::isnan(alpha) || alpha < 0.0)
        throw std::domain_error("on_probability: alpha must be nonnegative");
    return std::exp(-alpha);
}

TransitionModel transition_rows(const SensingOperatingPoint& sensing,
                                const std::array<double, 4>& alphas, const SystemParams& params) {
    const double pd = sensing.p_d;
    const double pf = sensing.p_f;
    std::array<double, 4> on;
    for (int k = 0; k < 4; ++k) on[k] = on_probability(alphas[k]);

    // Destination factors common to both origin rows: sensing outcome within
    // the destination's true state, times the ON/OFF split.
    const std::array<double, 8> dest = {
        pd * on[0],         pd * (1.0 - on[0]),          // busy, detected busy
        (1.0 - pd) * on[1], (1.0 - pd) * (1.0 - on[1]),  // busy, detected idle
        pf * on[2],         pf * (1.0 - on[2]),          // idle, detected busy
        (1.0 - pf) * on[3], (1.0 - pf) * (1.0 - on[3]),  // idle, detected idle
    };

    TransitionModel model;
    model.alphas = alphas;
    for (int j = 0; j < 8; ++j) {
        const bool dest_busy = j < 4;
        model.p_b[j] = (dest_busy ? 1.0 - params.a : params.a) * dest[j];
        model.p_i[j] = (dest_busy ? params.b : 1.0 - params.b) * dest[j];
    }
    return model;
}

}  // namespace statemodel
}  // namespace cogcap
