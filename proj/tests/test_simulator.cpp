#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cogcap/errors.hpp"
#include "cogcap/simulator.hpp"
#include "oracle_helpers.hpp"

using namespace cogcap;

namespace {

SimConfig baseline_sim() {
    SimConfig sim;
    sim.n_frames = 100000;
    sim.seed = 11;
    sim.params = SystemParams{};
    sim.rates = {0.2, 1.2};
    sim.powers = {10.0, 10.0, 0.1, 10.0, 10.0};
    sim.sensing = sensing::operating_point_from_pd(0.92, sim.params);
    sim.kind = EstimatorKind::MismatchedMMSE;
    return sim;
}

std::vector<FrameRecord> constant_on_trajectory(std::size_t n, double T, double rate) {
    std::vector<FrameRecord> frames(n);
    for (std::size_t i = 0; i < n; ++i)
        frames[i] = {i, false, false, 4, 1.0, true, T * rate};
    return frames;
}

}  // namespace

TEST_CASE("frame generation") {
    SUBCASE("stuck-busy chain only produces busy scenarios") {
        SimConfig sim = baseline_sim();
        sim.params.a = 1e-15;
        sim.params.b = 1.0 - 1e-15;
        sim.n_frames = 50000;
        for (const FrameRecord& f : simulate_frames(sim)) {
            CHECK(f.pu_busy);
            CHECK((f.scenario == 1 || f.scenario == 2));
        }
    }
    SUBCASE("scenario frequencies match the stationary Markov products") {
        SimConfig sim = baseline_sim();
        sim.n_frames = 1000000;
        const auto frames = simulate_frames(sim);
        const double n = static_cast<double>(frames.size());
        std::array<double, 4> count{};
        for (const FrameRecord& f : frames) count[f.scenario - 1] += 1.0;

        const double pi_busy = sim.params.b / (sim.params.a + sim.params.b);
        const std::array<double, 4> expected = {
            pi_busy * sim.sensing.p_d, pi_busy * (1.0 - sim.sensing.p_d),
            (1.0 - pi_busy) * sim.sensing.p_f, (1.0 - pi_busy) * (1.0 - sim.sensing.p_f)};
        for (int k = 0; k < 4; ++k) {
            const double se = std::sqrt(expected[k] * (1.0 - expected[k]) / n);
            CHECK(std::abs(count[k] / n - expected[k]) <= 3.0 * se);
        }
    }
    SUBCASE("ON fraction per scenario tracks exp(-alpha)") {
        SimConfig sim = baseline_sim();
        sim.n_frames = 1000000;
        const auto frames = simulate_frames(sim);

        const ScenarioSnrs snrs = statemodel::scenario_snrs(
            sim.powers, sim.kind, sim.sensing, sim.params);
        const auto alphas = statemodel::rate_thresholds(sim.rates, snrs, sim.params);

        std::array<double, 4> on{}, total{};
        for (const FrameRecord& f : frames) {
            total[f.scenario - 1] += 1.0;
            on[f.scenario - 1] += f.on ? 1.0 : 0.0;
        }
        for (int k = 0; k < 4; ++k) {
            REQUIRE(total[k] > 1000.0);
            const double expected = statemodel::on_probability(alphas[k]);
            const double se = std::sqrt(expected * (1.0 - expected) / total[k]);
            CHECK(std::abs(on[k] / total[k] - expected) <= 3.0 * se);
        }
    }
    SUBCASE("long-run busy fraction converges to b/(a+b)") {
        SimConfig sim = baseline_sim();
        sim.n_frames = 400000;
        double busy = 0.0;
        for (const FrameRecord& f : simulate_frames(sim)) busy += f.pu_busy ? 1.0 : 0.0;
        const double pi_busy = sim.params.b / (sim.params.a + sim.params.b);
        const double n = static_cast<double>(sim.n_frames);
        // lag-1 correlation of the busy indicator is 1-a-b = 0 at the baseline
        const double se = std::sqrt(pi_busy * (1.0 - pi_busy) / n);
        CHECK(std::abs(busy / n - pi_busy) <= 3.0 * se);
    }
    SUBCASE("identical seeds reproduce the trajectory bit for bit") {
        const SimConfig sim = baseline_sim();
        const auto run1 = simulate_frames(sim);
        const auto run2 = simulate_frames(sim);
        REQUIRE(run1.size() == run2.size());
        for (size_t i = 0; i < run1.size(); ++i) {
            CHECK(run1[i].z == run2[i].z);
            CHECK(run1[i].service_bits == run2[i].service_bits);
            CHECK(run1[i].scenario == run2[i].scenario);
        }
    }
    SUBCASE("per-component streams: sensing changes leave the PU chain alone") {
        SimConfig sim = baseline_sim();
        sim.n_frames = 20000;
        const auto run1 = simulate_frames(sim);
        sim.sensing = sensing::operating_point_from_pd(0.35, sim.params);
        sim.rates = {3.0, 4.0};
        const auto run2 = simulate_frames(sim);
        for (size_t i = 0; i < run1.size(); ++i) CHECK(run1[i].pu_busy == run2[i].pu_busy);
    }
    SUBCASE("z is a unit-mean exponential draw") {
        SimConfig sim = baseline_sim();
        sim.n_frames = 400000;
        oracle::Moments z;
        for (const FrameRecord& f : simulate_frames(sim)) z.add(f.z);
        CHECK(std::abs(z.mean - 1.0) <= 3.0 * z.std_error());
    }
}

TEST_CASE("true MMSE simulation path") {
    SimConfig sim = baseline_sim();
    sim.kind = EstimatorKind::TrueMMSE;
    sim.n_frames = 60000;
    sim.mc_prepass_samples = 50000;
    const auto run1 = simulate_frames(sim);
    const auto run2 = simulate_frames(sim);
    REQUIRE(run1.size() == sim.n_frames);
    for (size_t i = 0; i < 200; ++i) CHECK(run1[i].z == run2[i].z);

    double on = 0.0;
    for (const FrameRecord& f : run1) on += f.on ? 1.0 : 0.0;
    CHECK(on / static_cast<double>(run1.size()) > 0.05);
    CHECK(on / static_cast<double>(run1.size()) < 0.999);
}

TEST_CASE("interference stays under the cap that sized p_avg") {
    const double i_avg = 0.7;
    const double mean_gain = 1.4;
    const double p_avg = i_avg / mean_gain;  // 0.5

    SimConfig sim = baseline_sim();
    sim.n_frames = 400000;
    // Tight policy: P_d p1 + (1 - P_d) p2 == p_avg exactly.
    const double pd = sim.sensing.p_d;
    sim.powers.p1_bar = 0.3;
    sim.powers.p2_bar = (p_avg - pd * 0.3) / (1.0 - pd);
    REQUIRE(sim.powers.p2_bar > 0.0);
    sim.powers.p_avg = p_avg;

    oracle::Sampler gain_sampler(55);
    oracle::Moments interference;
    for (const FrameRecord& f : simulate_frames(sim)) {
        if (!f.pu_busy) continue;
        const double tx_power = f.detected_busy ? sim.powers.p1_bar : sim.powers.p2_bar;
        interference.add(tx_power * gain_sampler.exponential(mean_gain));
    }
    CHECK(interference.mean <= i_avg + 3.0 * interference.std_error());
}

TEST_CASE("empirical effective capacity") {
    const SystemParams p;

    SUBCASE("deterministic all-ON service is exact") {
        const auto frames = constant_on_trajectory(20000, p.T, 340.0);
        const EffCapEstimate est = empirical_effective_capacity(frames, 0.37, p.T, p.B);
        CHECK(est.value == doctest::Approx(340.0 / p.B).epsilon(1e-12));
        CHECK(est.std_error <= 1e-12);
    }
    SUBCASE("tiny theta recovers the sample-mean service rate") {
        SimConfig sim = baseline_sim();
        sim.n_frames = 100000;
        const auto frames = simulate_frames(sim);
        double mean_bits = 0.0;
        for (const FrameRecord& f : frames) mean_bits += f.service_bits;
        mean_bits /= static_cast<double>(frames.size());

        const EffCapEstimate est = empirical_effective_capacity(frames, 1e-6, p.T, p.B);
        const double expected = mean_bits / (p.T * p.B);
        CHECK(std::abs(est.value - expected) <= 3.0 * est.std_error + 1e-9);
    }
    SUBCASE("matches the analytic value at the baseline operating point") {
        SimConfig sim = baseline_sim();
        sim.n_frames = 200000;
        const auto frames = simulate_frames(sim);
        const EffCapEstimate est =
            empirical_effective_capacity(frames, p.theta, p.T, p.B);
        const double analytic = effcap::effective_capacity(p.theta, sim.rates, sim.powers,
                                                           sim.sensing, sim.kind, sim.params)
                                    .value;
        CHECK(std::abs(est.value - analytic) <=
              std::max(0.02 * std::abs(analytic), 3.0 * est.std_error));
    }
    SUBCASE("short trajectories are rejected") {
        const auto frames = constant_on_trajectory(5000, p.T, 10.0);
        CHECK_THROWS_AS(empirical_effective_capacity(frames, 0.1, p.T, p.B), InsufficientData);
    }
}

TEST_CASE("queue-tail exponent") {
    const SystemParams p;
    SimConfig sim = baseline_sim();
    sim.n_frames = 1000000;
    const auto frames = simulate_frames(sim);
    const double analytic = effcap::effective_capacity(p.theta, sim.rates, sim.powers,
                                                       sim.sensing, sim.kind, sim.params)
                                .value;

    SUBCASE("zero arrivals never build a queue") {
        const QueueTailFit fit = queue_tail_exponent(frames, 0.0, p);
        CHECK_FALSE(fit.fitted);
    }
    SUBCASE("slack traffic decays faster than theta") {
        const QueueTailFit fit = queue_tail_exponent(frames, 0.5 * analytic * p.B, p);
        REQUIRE(fit.fitted);
        CHECK(fit.theta_hat > p.theta);
    }
    SUBCASE("arrivals above the service mean diverge") {
        double mean_bits = 0.0;
        for (const FrameRecord& f : frames) mean_bits += f.service_bits;
        mean_bits /= static_cast<double>(frames.size());
        CHECK_THROWS_AS(queue_tail_exponent(frames, 1.5 * mean_bits / p.T, p),
                        DivergentQueue);
    }
}
