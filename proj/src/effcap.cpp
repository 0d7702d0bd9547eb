#include "cogcap/effcap.hpp"

#include <cmath>
#include <stdexcept>

#include "cogcap/errors.hpp"

namespace cogcap::effcap {

std::array<double, 8> mgf_diagonal(double theta, double T, const RatePolicy& rates) {
    const double on1 = std::exp(theta * T * rates.r1);
    const double on2 = std::exp(theta * T * rates.r2);
    return {on1, 1.0, on2, 1.0, on1, 1.0, on2, 1.0};
}

double spectral_radius_closed(double theta, const TransitionModel& rows, const RatePolicy& rates,
                              double T) {
    const auto phi = mgf_diagonal(theta, T, rates);

    double busy_part = 0.0;  // sum_k phi_k p_bk over the busy destination states 1..4
    double idle_part = 0.0;  // sum_k phi_k p_ik over the idle destination states 5..8
    double cross_bi = 0.0;   // sum_k phi_k p_ik, k = 1..4
    double cross_ib = 0.0;   // sum_k phi_k p_bk, k = 5..8
    for (int k = 0; k < 4; ++k) {
        busy_part += phi[k] * rows.p_b[k];
        cross_bi += phi[k] * rows.p_i[k];
    }
    for (int k = 4; k < 8; ++k) {
        idle_part += phi[k] * rows.p_i[k];
        cross_ib += phi[k] * rows.p_b[k];
    }

    double radicand = (busy_part - idle_part) * (busy_part - idle_part) + 4.0 * cross_bi * cross_ib;
    if (radicand < 0.0) {
        if (radicand < -1e-12)
            throw NumericalError("spectral_radius_closed: negative discriminant");
        radicand = 0.0;
    }
    return 0.5 * (busy_part + idle_part) + 0.5 * std::sqrt(radicand);
}

double effective_capacity(double theta, const TransitionModel& rows, const RatePolicy& rates,
                          double T, double B) {
    if (!(theta > 0.0)) throw std::domain_error("effective_capacity: theta must be positive");
    const double sp = spectral_radius_closed(-theta, rows, rates, T);
    if (!(sp > 0.0)) throw NumericalError("effective_capacity: nonpositive spectral radius");
    return -std::log(sp) / (theta * T * B);
}

EffCapResult effective_capacity(double theta, const RatePolicy& rates, const PowerPolicy& powers,
                                const SensingOperatingPoint& sensing, EstimatorKind kind,
                                const SystemParams& params) {
    const ScenarioSnrs snrs = statemodel::scenario_snrs(powers, kind, sensing, params);
    const auto alphas = statemodel::rate_thresholds(rates, snrs, params);
    const TransitionModel rows = statemodel::transition_rows(sensing, alphas, params);

    EffCapResult result;
    result.theta = theta;
    result.rates = rates;
    result.powers = powers;
    result.sp = spectral_radius_closed(-theta, rows, rates, params.T);
    result.value = effective_capacity(theta, rows, rates, params.T, params.B);
    return result;
}

double mean_service_rate(const TransitionModel& rows, const RatePolicy& rates, double T, double B) {
    // Busy-origin mass evolves autonomously: pi_busy' =
    // pi_busy * (mass p_b puts on states 1-4) + pi_idle * (mass p_i puts there).
    double to_busy_from_busy = 0.0;
    double to_busy_from_idle = 0.0;
    for (int k = 0; k < 4; ++k) {
        to_busy_from_busy += rows.p_b[k];
        to_busy_from_idle += rows.p_i[k];
    }
    const double denom = 1.0 - to_busy_from_busy + to_busy_from_idle;
    if (!(denom > 0.0))
        throw DegenerateInput("mean_service_rate: chain has no stationary busy/idle split");
    const double pi_busy = to_busy_from_idle / denom;
    const double pi_idle = 1.0 - pi_busy;

    // Stationary state distribution pi_k = pi_busy p_bk + pi_idle p_ik; only
    // the ON states 1, 3, 5, 7 serve (T r1, T r2, T r1, T r2 bits).
    const std::array<double, 8> bits = {T * rates.r1, 0.0, T * rates.r2, 0.0,
                                        T * rates.r1, 0.0, T * rates.r2, 0.0};
    double mean_bits = 0.0;
    for (int k = 0; k < 8; ++k)
        mean_bits += (pi_busy * rows.p_b[k] + pi_idle * rows.p_i[k]) * bits[k];
    return mean_bits / (T * B);
}

}  // namespace cogcap::effcap
