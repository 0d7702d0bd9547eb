#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cogcap/errors.hpp"
#include "cogcap/estimation.hpp"
#include "oracle_helpers.hpp"

using namespace cogcap;
using namespace cogcap::estimation;

namespace {

SystemParams baseline() { return SystemParams{}; }

PowerPolicy policy(double p1, double p2, double eta) {
    return PowerPolicy{p1, p2, eta, 10.0, 10.0};
}

// Direct substitution of the four per-scenario estimate-variance expressions,
// written out independently of the implementation.
double printed_sigma_hhat2(int scenario, const TrainingPowers& tp, const SystemParams& p) {
    const double h2 = p.sigma_h2, n2 = p.sigma_n2, s2 = p.sigma_s2;
    switch (scenario) {
        case 1: return tp.p_tb * h2 * h2 / (tp.p_tb * h2 + n2 + s2);
        case 2: {
            const double d = tp.p_ti * h2 + n2;
            return tp.p_ti * h2 * h2 * (tp.p_ti * h2 + n2 + s2) / (d * d);
        }
        case 3: {
            const double d = tp.p_tb * h2 + n2 + s2;
            return tp.p_tb * h2 * h2 * (tp.p_tb * h2 + n2) / (d * d);
        }
        default: return tp.p_ti * h2 * h2 / (tp.p_ti * h2 + n2);
    }
}

}  // namespace

TEST_CASE("frame energy split between pilot and data symbols") {
    const SystemParams p = baseline();

    SUBCASE("baseline arithmetic") {
        const TrainingPowers tp = pilot_and_data_powers(policy(1.0, 1.0, 0.1), p);
        CHECK(tp.p_tb == doctest::Approx(0.01).epsilon(1e-12));
        CHECK(tp.p_db == doctest::Approx(0.09 / 89.0).epsilon(1e-9));
        // energy accounting: pilot + data symbols exhaust the frame budget
        CHECK(tp.p_tb + p.data_symbols() * tp.p_db == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("vanishing training fraction") {
        const TrainingPowers tp = pilot_and_data_powers(policy(1.0, 1.0, 1e-12), p);
        CHECK(tp.p_tb == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
        CHECK(tp.p_db == doctest::Approx(0.1 / 89.0).epsilon(1e-9));
    }
    SUBCASE("silent idle-detected transmitter") {
        const TrainingPowers tp = pilot_and_data_powers(policy(1.0, 0.0, 0.1), p);
        CHECK(tp.p_ti == 0.0);
        CHECK(tp.p_di == 0.0);
    }
}

TEST_CASE("noise-variance priors") {
    SUBCASE("perfect sensing leaves no uncertainty") {
        const NoisePriors pr = noise_priors(true, 1.0, 0.0, 0.9, 0.1);
        CHECK(pr.p_noise_only == 0.0);
        CHECK(pr.p_noise_plus_signal == 1.0);
    }
    SUBCASE("symmetric chain cancels the occupancy weights") {
        const NoisePriors pr = noise_priors(true, 0.9, 0.3, 0.4, 0.4);
        CHECK(pr.p_noise_only == doctest::Approx(0.3 / (0.3 + 0.9)).epsilon(1e-12));
    }
    SUBCASE("hand-evaluated reference point") {
        const NoisePriors pr = noise_priors(true, 0.92, 0.24, 0.9, 0.1);
        CHECK(pr.p_noise_only == doctest::Approx(0.216 / 0.308).epsilon(1e-12));
        CHECK(pr.p_noise_only + pr.p_noise_plus_signal == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("degenerate decision is rejected") {
        CHECK_THROWS_AS(noise_priors(true, 0.0, 0.0, 0.9, 0.1), DegenerateInput);
        CHECK_THROWS_AS(noise_priors(false, 1.0, 1.0, 0.9, 0.1), DegenerateInput);
    }
    SUBCASE("Bayes-rule Monte Carlo over the chain and detector") {
        const double a = 0.9, b = 0.1, pd = 0.92, pf = 0.24;
        oracle::Sampler sampler(77);
        std::uint64_t detected_busy = 0, idle_and_detected_busy = 0;
        const int n = 400000;
        for (int i = 0; i < n; ++i) {
            const bool busy = sampler.bernoulli(b / (a + b));
            const bool det = sampler.bernoulli(busy ? pd : pf);
            if (det) {
                ++detected_busy;
                if (!busy) ++idle_and_detected_busy;
            }
        }
        const double expected = noise_priors(true, pd, pf, a, b).p_noise_only;
        const double empirical =
            static_cast<double>(idle_and_detected_busy) / static_cast<double>(detected_busy);
        const double se = std::sqrt(expected * (1.0 - expected) / detected_busy);
        CHECK(std::abs(empirical - expected) <= 3.0 * se);
    }
}

TEST_CASE("mismatched coefficient") {
    const SystemParams p = baseline();
    CHECK(mismatched_coefficient(0.0, true, p) == 0.0);
    CHECK(mismatched_coefficient(1.0, false, p) == doctest::Approx(0.5).epsilon(1e-15));
    SystemParams quiet = p;
    quiet.sigma_s2 = 0.0;
    for (double pt : {0.01, 0.5, 2.0})
        CHECK(mismatched_coefficient(pt, true, quiet) == mismatched_coefficient(pt, false, quiet));
}

TEST_CASE("linear MMSE coefficient") {
    const SystemParams p = baseline();

    SUBCASE("collapsed priors reduce to the mismatched branches") {
        CHECK(linear_mmse_coefficient(0.7, {1.0, 0.0}, p) ==
              doctest::Approx(mismatched_coefficient(0.7, false, p)).epsilon(1e-15));
        CHECK(linear_mmse_coefficient(0.7, {0.0, 1.0}, p) ==
              doctest::Approx(mismatched_coefficient(0.7, true, p)).epsilon(1e-15));
    }
    SUBCASE("hand-evaluated mixture") {
        SystemParams q = p;
        q.sigma_s2 = 2.0;
        CHECK(linear_mmse_coefficient(1.0, {0.5, 0.5}, q) ==
              doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
    SUBCASE("coefficient lies between the mismatched branches") {
        oracle::Sampler sampler(3);
        for (int trial = 0; trial < 200; ++trial) {
            const double pt = 100.0 * sampler.uniform();
            const double w = sampler.uniform();
            const double k = linear_mmse_coefficient(pt, {w, 1.0 - w}, p);
            const double k_busy = mismatched_coefficient(pt, true, p);
            const double k_idle = mismatched_coefficient(pt, false, p);
            CHECK(k >= k_busy - 1e-15);
            CHECK(k <= k_idle + 1e-15);
        }
    }
    SUBCASE("matches E{h y*}/E{|y|^2} estimated by simulation") {
        const double pt = 1.3;
        const NoisePriors priors = noise_priors(true, 0.92, 0.2526, p.a, p.b);
        oracle::Sampler sampler(41);
        double num = 0.0, den = 0.0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i) {
            const bool busy = sampler.bernoulli(priors.p_noise_plus_signal);
            const std::complex<double> h = sampler.complex_gaussian(p.sigma_h2);
            std::complex<double> y = std::sqrt(pt) * h + sampler.complex_gaussian(p.sigma_n2);
            if (busy) y += sampler.complex_gaussian(p.sigma_s2);
            num += (h * std::conj(y)).real();
            den += std::norm(y);
        }
        CHECK(num / den == doctest::Approx(linear_mmse_coefficient(pt, priors, p)).epsilon(5e-3));
    }
}

TEST_CASE("true MMSE estimate") {
    const SystemParams p = baseline();
    const double pt = 0.8;

    SUBCASE("collapsed mixture equals the idle mismatched estimate") {
        const double k_idle = mismatched_coefficient(pt, false, p);
        oracle::Sampler sampler(9);
        for (int i = 0; i < 50; ++i) {
            const std::complex<double> y = sampler.complex_gaussian(3.0);
            const std::complex<double> est = true_mmse_estimate(y, pt, {1.0, 0.0}, p);
            CHECK(std::abs(est - k_idle * y) <= 1e-12);
        }
    }
    SUBCASE("no primary signal collapses both branches") {
        SystemParams quiet = p;
        quiet.sigma_s2 = 0.0;
        const double k = mismatched_coefficient(pt, true, quiet);
        const std::complex<double> y{1.7, -0.4};
        CHECK(std::abs(true_mmse_estimate(y, pt, {0.3, 0.7}, quiet) - k * y) <= 1e-12);
    }
    SUBCASE("beats the linear and mismatched estimators in MSE") {
        const NoisePriors priors = noise_priors(true, 0.92, 0.2526, p.a, p.b);
        const double k_lin = linear_mmse_coefficient(pt, priors, p);
        const double k_mis = mismatched_coefficient(pt, true, p);
        oracle::Sampler sampler(123);
        oracle::Moments d_true_lin, d_lin_mis;
        const int n = 400000;
        for (int i = 0; i < n; ++i) {
            const bool busy = sampler.bernoulli(priors.p_noise_plus_signal);
            const std::complex<double> h = sampler.complex_gaussian(p.sigma_h2);
            std::complex<double> y = std::sqrt(pt) * h + sampler.complex_gaussian(p.sigma_n2);
            if (busy) y += sampler.complex_gaussian(p.sigma_s2);
            const double e_true = std::norm(h - true_mmse_estimate(y, pt, priors, p));
            const double e_lin = std::norm(h - k_lin * y);
            const double e_mis = std::norm(h - k_mis * y);
            d_true_lin.add(e_lin - e_true);
            d_lin_mis.add(e_mis - e_lin);
        }
        CHECK(d_true_lin.mean >= -2.0 * d_true_lin.std_error());
        CHECK(d_lin_mis.mean >= -2.0 * d_lin_mis.std_error());
    }
}

TEST_CASE("per-scenario estimation statistics") {
    const SystemParams p = baseline();
    const NoisePriors busy_priors = noise_priors(true, 0.92, 0.2526, p.a, p.b);
    const NoisePriors idle_priors = noise_priors(false, 0.92, 0.2526, p.a, p.b);
    auto priors_for = [&](int scenario) -> const NoisePriors& {
        return scenario_detected_busy(scenario) ? busy_priors : idle_priors;
    };

    SUBCASE("matches the printed scenario formulas for mismatched MMSE") {
        const TrainingPowers tp = pilot_and_data_powers(policy(2.0, 0.7, 0.25), p);
        for (int scenario = 1; scenario <= 4; ++scenario) {
            const EstimationStats s = estimation_stats(EstimatorKind::MismatchedMMSE, scenario,
                                                       tp, priors_for(scenario), p);
            CHECK(s.sigma_hhat2 ==
                  doctest::Approx(printed_sigma_hhat2(scenario, tp, p)).epsilon(1e-12));
        }
    }
    SUBCASE("scenario 1 at the baseline training split") {
        const TrainingPowers tp = pilot_and_data_powers(policy(1.0, 1.0, 0.1), p);
        const EstimationStats s =
            estimation_stats(EstimatorKind::MismatchedMMSE, 1, tp, busy_priors, p);
        CHECK(s.sigma_hhat2 == doctest::Approx(0.01 / 2.01).epsilon(1e-12));
    }
    SUBCASE("asymptotically perfect training") {
        TrainingPowers tp{};
        tp.p_ti = 1e9;
        const EstimationStats s =
            estimation_stats(EstimatorKind::MismatchedMMSE, 4, tp, idle_priors, p);
        CHECK(s.sigma_hhat2 == doctest::Approx(p.sigma_h2).epsilon(1e-8));
        CHECK(s.sigma_htilde2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    }
    SUBCASE("the undetected primary signal inflates the miss-detection variance") {
        const TrainingPowers tp = pilot_and_data_powers(policy(1.0, 1.0, 0.1), p);
        const EstimationStats s2 =
            estimation_stats(EstimatorKind::MismatchedMMSE, 2, tp, idle_priors, p);
        const EstimationStats s4 =
            estimation_stats(EstimatorKind::MismatchedMMSE, 4, tp, idle_priors, p);
        CHECK(s2.sigma_hhat2 >= s4.sigma_hhat2);
    }
    SUBCASE("correct-detection scenarios satisfy the orthogonality identity") {
        const TrainingPowers tp = pilot_and_data_powers(policy(1.0, 1.0, 0.1), p);
        for (int scenario : {1, 4}) {
            // the coefficient matches the true statistics, so the error
            // variance collapses to sigma_h2 - sigma_hhat2
            const EstimationStats s = estimation_stats(
                EstimatorKind::MismatchedMMSE, scenario, tp,
                scenario == 1 ? NoisePriors{0.0, 1.0} : NoisePriors{1.0, 0.0}, p);
            CHECK(s.sigma_htilde2 ==
                  doctest::Approx(p.sigma_h2 - s.sigma_hhat2).epsilon(1e-12));
        }
    }
    SUBCASE("variances stay nonnegative over the admissible grid") {
        oracle::Sampler sampler(31);
        for (int trial = 0; trial < 400; ++trial) {
            SystemParams q = p;
            q.sigma_h2 = 0.1 + 9.9 * sampler.uniform();
            q.sigma_n2 = 0.1 + 9.9 * sampler.uniform();
            q.sigma_s2 = 0.1 + 9.9 * sampler.uniform();
            TrainingPowers tp{};
            tp.p_tb = 100.0 * sampler.uniform();
            tp.p_ti = 100.0 * sampler.uniform();
            const int scenario = 1 + static_cast<int>(sampler.uniform() * 3.999);
            const auto kind = sampler.bernoulli(0.5) ? EstimatorKind::MismatchedMMSE
                                                     : EstimatorKind::LinearMMSE;
            const double w = sampler.uniform();
            const EstimationStats s = estimation_stats(kind, scenario, tp, {w, 1.0 - w}, q);
            CHECK(s.sigma_hhat2 >= 0.0);
            CHECK(s.sigma_htilde2 >= 0.0);
        }
    }
    SUBCASE("Monte-Carlo consistency of the closed-form variances") {
        const TrainingPowers tp = pilot_and_data_powers(policy(1.5, 0.8, 0.15), p);
        for (EstimatorKind kind : {EstimatorKind::MismatchedMMSE, EstimatorKind::LinearMMSE}) {
            for (int scenario = 1; scenario <= 4; ++scenario) {
                const EstimationStats s =
                    estimation_stats(kind, scenario, tp, priors_for(scenario), p);
                oracle::Sampler sampler(1000 + scenario + 10 * static_cast<int>(kind));
                oracle::Moments est2, err2;
                const bool busy = scenario_is_busy(scenario);
                const double pt = scenario_detected_busy(scenario) ? tp.p_tb : tp.p_ti;
                const int n = 1000000;
                for (int i = 0; i < n; ++i) {
                    const std::complex<double> h = sampler.complex_gaussian(p.sigma_h2);
                    std::complex<double> y =
                        std::sqrt(pt) * h + sampler.complex_gaussian(p.sigma_n2);
                    if (busy) y += sampler.complex_gaussian(p.sigma_s2);
                    est2.add(std::norm(s.k * y));
                    err2.add(std::norm(h - s.k * y));
                }
                CHECK(std::abs(est2.mean - s.sigma_hhat2) <= 3.0 * est2.std_error());
                CHECK(std::abs(err2.mean - s.sigma_htilde2) <= 3.0 * err2.std_error());
            }
        }
    }
    SUBCASE("true MMSE is rejected on the closed-form path") {
        const TrainingPowers tp = pilot_and_data_powers(policy(1.0, 1.0, 0.1), p);
        CHECK_THROWS_AS(estimation_stats(EstimatorKind::TrueMMSE, 1, tp, busy_priors, p),
                        UnsupportedCombination);
    }
    SUBCASE("scenario out of range") {
        const TrainingPowers tp = pilot_and_data_powers(policy(1.0, 1.0, 0.1), p);
        CHECK_THROWS_AS(estimation_stats(EstimatorKind::MismatchedMMSE, 0, tp, busy_priors, p),
                        std::domain_error);
        CHECK_THROWS_AS(estimation_stats(EstimatorKind::MismatchedMMSE, 5, tp, busy_priors, p),
                        std::domain_error);
    }
}

TEST_CASE("perfect sensing makes all estimators agree") {
    const SystemParams p = baseline();
    for (bool detected_busy : {true, false}) {
        const NoisePriors priors = noise_priors(detected_busy, 1.0, 0.0, p.a, p.b);
        for (double pt : {0.01, 1.0, 10.0}) {
            const double k_mis = mismatched_coefficient(pt, detected_busy, p);
            const double k_lin = linear_mmse_coefficient(pt, priors, p);
            CHECK(std::abs(k_lin - k_mis) <= 1e-12);
            const std::complex<double> y{0.83, -1.91};
            CHECK(std::abs(true_mmse_estimate(y, pt, priors, p) - k_mis * y) <= 1e-12);
        }
    }
}

TEST_CASE("true MMSE Monte-Carlo pre-pass") {
    const SystemParams p = baseline();
    const TrainingPowers tp = pilot_and_data_powers(policy(1.0, 1.0, 0.1), p);

    SUBCASE("variance split is conserved") {
        const NoisePriors priors = noise_priors(true, 0.92, 0.2526, p.a, p.b);
        const EstimationStats s = true_mmse_stats_monte_carlo(1, tp, priors, p, 100000, 5);
        CHECK(s.sigma_hhat2 >= 0.0);
        CHECK(s.sigma_hhat2 + s.sigma_htilde2 == doctest::Approx(p.sigma_h2).epsilon(1e-12));
    }
    SUBCASE("reduces to the matched closed form under perfect sensing") {
        const NoisePriors priors = noise_priors(false, 1.0, 0.0, p.a, p.b);
        const EstimationStats closed =
            estimation_stats(EstimatorKind::MismatchedMMSE, 4, tp, priors, p);
        const EstimationStats mc = true_mmse_stats_monte_carlo(4, tp, priors, p, 400000, 6);
        // |h_hat|^2 is exponential, so the variance estimate has SE ~ sigma_hhat2/sqrt(n)
        CHECK(std::abs(mc.sigma_hhat2 - closed.sigma_hhat2) <=
              4.0 * closed.sigma_hhat2 / std::sqrt(400000.0));
    }
    SUBCASE("deterministic per seed") {
        const NoisePriors priors = noise_priors(true, 0.92, 0.2526, p.a, p.b);
        const EstimationStats s1 = true_mmse_stats_monte_carlo(2, tp, priors, p, 50000, 9);
        const EstimationStats s2 = true_mmse_stats_monte_carlo(2, tp, priors, p, 50000, 9);
        CHECK(s1.sigma_hhat2 == s2.sigma_hhat2);
    }
}

TEST_CASE("power policy validation") {
    CHECK_NOTHROW(policy(1.0, 2.0, 0.1).validate());
    CHECK_THROWS_AS(policy(-1.0, 2.0, 0.1).validate(), ConfigError);
    CHECK_THROWS_AS(policy(11.0, 2.0, 0.1).validate(), ConfigError);
    CHECK_THROWS_AS(policy(1.0, 2.0, 1.0).validate(), ConfigError);
    CHECK(avg_power_slack(policy(1.0, 2.0, 0.1), 0.5) == doctest::Approx(10.0 - 1.5));
}
