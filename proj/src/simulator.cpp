#include "cogcap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "cogcap/detail/rng.hpp"
#include "cogcap/errors.hpp"

namespace cogcap {

namespace {

enum StreamId : std::uint64_t { kPuChain = 1, kSensing = 2, kFading = 3, kNoise = 4 };

struct ScenarioTable {
    // Per scenario (index 0..3): estimate variance, ON threshold on |h_hat|^2,
    // and the coefficient applied to the training observation (NaN for true MMSE).
    std::array<double, 4> sigma_hhat2;
    std::array<double, 4> hhat2_on_threshold;
    std::array<double, 4> coeff;
};

ScenarioTable build_table(const SimConfig& cfg) {
    const TrainingPowers powers = estimation::pilot_and_data_powers(cfg.powers, cfg.params);
    const NoisePriors busy_priors = estimation::noise_priors(true, cfg.sensing.p_d,
                                                             cfg.sensing.p_f, cfg.params.a,
                                                             cfg.params.b);
    const NoisePriors idle_priors = estimation::noise_priors(false, cfg.sensing.p_d,
                                                             cfg.sensing.p_f, cfg.params.a,
                                                             cfg.params.b);

    std::array<EstimationStats, 4> stats;
    for (int scenario = 1; scenario <= 4; ++scenario) {
        const NoisePriors& priors = scenario_detected_busy(scenario) ? busy_priors : idle_priors;
        if (cfg.kind == EstimatorKind::TrueMMSE) {
            stats[scenario - 1] = estimation::true_mmse_stats_monte_carlo(
                scenario, powers, priors, cfg.params, cfg.mc_prepass_samples, cfg.seed);
        } else {
            stats[scenario - 1] =
                estimation::estimation_stats(cfg.kind, scenario, powers, priors, cfg.params);
        }
    }

    const ScenarioSnrs snrs = statemodel::snrs_from_stats(stats, powers, cfg.params);
    const auto alphas = statemodel::rate_thresholds(cfg.rates, snrs, cfg.params);

    ScenarioTable table;
    for (int k = 0; k < 4; ++k) {
        table.sigma_hhat2[k] = stats[k].sigma_hhat2;
        table.hhat2_on_threshold[k] = alphas[k] * stats[k].sigma_hhat2;
        table.coeff[k] = stats[k].k;
    }
    return table;
}

}  // namespace

std::vector<FrameRecord> simulate_frames(const SimConfig& config) {
    if (config.n_frames == 0) throw ConfigError("simulate_frames: need at least one frame");
    config.params.validate();
    config.powers.validate();

    const SystemParams& p = config.params;
    const TrainingPowers powers = estimation::pilot_and_data_powers(config.powers, p);
    const NoisePriors busy_priors =
        estimation::noise_priors(true, config.sensing.p_d, config.sensing.p_f, p.a, p.b);
    const NoisePriors idle_priors =
        estimation::noise_priors(false, config.sensing.p_d, config.sensing.p_f, p.a, p.b);
    const ScenarioTable table = build_table(config);
    const bool true_mmse = config.kind == EstimatorKind::TrueMMSE;

    detail::Stream pu(config.seed, kPuChain);
    detail::Stream sense(config.seed, kSensing);
    detail::Stream fading(config.seed, kFading);
    detail::Stream noise(config.seed, kNoise);

    std::vector<FrameRecord> frames;
    frames.reserve(config.n_frames);

    // Start the PU chain from its stationary distribution.
    bool busy = pu.bernoulli(p.b / (p.a + p.b));

    for (std::uint64_t i = 0; i < config.n_frames; ++i) {
        if (i > 0) busy = busy ? !pu.bernoulli(p.a) : pu.bernoulli(p.b);
        const bool detected = sense.bernoulli(busy ? config.sensing.p_d : config.sensing.p_f);
        const int scenario = busy ? (detected ? 1 : 2) : (detected ? 3 : 4);

        const std::complex<double> h = fading.complex_gaussian(p.sigma_h2);
        const double p_t = detected ? powers.p_tb : powers.p_ti;
        std::complex<double> y = std::sqrt(p_t) * h + noise.complex_gaussian(p.sigma_n2);
        if (busy && p.sigma_s2 > 0.0) y += noise.complex_gaussian(p.sigma_s2);

        std::complex<double> h_hat;
        if (true_mmse) {
            const NoisePriors& priors = detected ? busy_priors : idle_priors;
            h_hat = estimation::true_mmse_estimate(y, p_t, priors, p);
        } else {
            h_hat = table.coeff[scenario - 1] * y;
        }

        const double hhat2 = std::norm(h_hat);
        const bool on = hhat2 > table.hhat2_on_threshold[scenario - 1];
        const double rate = detected ? config.rates.r1 : config.rates.r2;

        FrameRecord rec;
        rec.index = i;
        rec.pu_busy = busy;
        rec.detected_busy = detected;
        rec.scenario = scenario;
        rec.z = table.sigma_hhat2[scenario - 1] > 0.0 ? hhat2 / table.sigma_hhat2[scenario - 1]
                                                      : 0.0;
        rec.on = on;
        rec.service_bits = on ? p.T * rate : 0.0;
        frames.push_back(rec);
    }
    return frames;
}

EffCapEstimate empirical_effective_capacity(std::span<const FrameRecord> trajectory, double theta,
                                            double T, double B, std::size_t block_len) {
    if (!(theta > 0.0))
        throw std::domain_error("empirical_effective_capacity: theta must be positive");
    const std::size_t n = trajectory.size();
    if (block_len == 0) block_len = std::min<std::size_t>(100, std::max<std::size_t>(50, n / 400));
    const std::size_t n_blocks = block_len ? n / block_len : 0;
    if (block_len < 50 || n_blocks < 200)
        throw InsufficientData(
            "empirical_effective_capacity: need at least 200 blocks of at least 50 frames");

    // Batch means of e^(-theta * block service); the per-frame log-MGF is
    // ln(mean)/block_len. theta * S easily exceeds the exp() range, so the
    // mean is formed in log space with a max shift.
    std::vector<double> w(n_blocks);
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_blocks; ++j) {
        double bits = 0.0;
        for (std::size_t i = j * block_len; i < (j + 1) * block_len; ++i)
            bits += trajectory[i].service_bits;
        w[j] = -theta * bits;
        shift = std::max(shift, w[j]);
    }
    std::vector<double> scaled(n_blocks);
    double sum = 0.0;
    for (std::size_t j = 0; j < n_blocks; ++j) {
        scaled[j] = std::exp(w[j] - shift);
        sum += scaled[j];
    }

    const double denom = theta * static_cast<double>(block_len) * T * B;
    const double logn = std::log(static_cast<double>(n_blocks));
    const double full = -(shift + std::log(sum) - logn) / denom;

    // Jackknife over blocks.
    const double logn1 = std::log(static_cast<double>(n_blocks - 1));
    std::vector<double> loo(n_blocks);
    double loo_mean = 0.0;
    for (std::size_t j = 0; j < n_blocks; ++j) {
        const double rest = std::max(sum - scaled[j], 1e-300);
        loo[j] = -(shift + std::log(rest) - logn1) / denom;
        loo_mean += loo[j];
    }
    loo_mean /= static_cast<double>(n_blocks);
    double var = 0.0;
    for (double v : loo) var += (v - loo_mean) * (v - loo_mean);
    var *= static_cast<double>(n_blocks - 1) / static_cast<double>(n_blocks);

    return {full, std::sqrt(var), n_blocks, block_len};
}

QueueTailFit queue_tail_exponent(std::span<const FrameRecord> trajectory, double arrival_rate_bps,
                                 const SystemParams& params) {
    if (trajectory.empty()) throw InsufficientData("queue_tail_exponent: empty trajectory");
    if (!(arrival_rate_bps >= 0.0))
        throw std::domain_error("queue_tail_exponent: arrival rate must be nonnegative");

    double mean_service = 0.0;
    for (const FrameRecord& f : trajectory) mean_service += f.service_bits;
    mean_service /= static_cast<double>(trajectory.size());

    const double arrival_bits = params.T * arrival_rate_bps;
    if (arrival_bits > mean_service)
        throw DivergentQueue("queue_tail_exponent: arrivals exceed the mean service rate");

    std::vector<double> samples(trajectory.size());
    double q = 0.0;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        q = std::max(0.0, q + arrival_bits - trajectory[i].service_bits);
        samples[i] = q;
    }
    std::sort(samples.begin(), samples.end());

    const double n = static_cast<double>(samples.size());
    auto tail_prob = [&](double level) {
        // Pr{Q >= level} from the sorted sample.
        const auto it = std::lower_bound(samples.begin(), samples.end(), level);
        return static_cast<double>(samples.end() - it) / n;
    };
    auto quantile_of_tail = [&](double prob) {
        // Smallest q with Pr{Q >= q} <= prob.
        const std::size_t rank = static_cast<std::size_t>(prob * n);
        return rank == 0 ? samples.back() : samples[samples.size() - rank];
    };

    const double q_lo = quantile_of_tail(1e-1);
    const double q_hi = quantile_of_tail(1e-4);
    if (!(q_hi > q_lo) || q_hi <= 0.0) return {false, 0.0, 0};

    // Least-squares slope of log Pr{Q >= q} over the fit window.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    const int grid = 40;
    for (int i = 0; i <= grid; ++i) {
        const double level = q_lo + (q_hi - q_lo) * i / grid;
        const double prob = tail_prob(level);
        if (prob < 1e-4 || prob > 1e-1) continue;
        const double lp = std::log(prob);
        sx += level;
        sy += lp;
        sxx += level * level;
        sxy += level * lp;
        ++count;
    }
    if (count < 2) return {false, 0.0, count};
    const double det = count * sxx - sx * sx;
    if (!(det > 0.0)) return {false, 0.0, count};
    const double slope = (count * sxy - sx * sy) / det;
    return {true, -slope, count};
}

}  // namespace cogcap
