#pragma once

#include <cmath>

namespace cogcap {

/// Physical constants of the cognitive link and its frame structure.
///
/// A frame lasts T seconds: the first N seconds are spent sensing the channel
/// (N*B complex samples at symbol rate B), one pilot symbol follows, and the
/// remaining (T-N)*B - 1 symbols carry data. Primary-user activity evolves as
/// a two-state Markov chain between frames: `a` is the busy->idle transition
/// probability, `b` the idle->busy one. `theta` is the QoS exponent (1/bits)
/// of the queue-tail constraint.
struct SystemParams {
    double T = 0.1;         ///< frame duration, seconds
    double N = 0.01;        ///< sensing duration, seconds
    double B = 1000.0;      ///< bandwidth, Hz (complex symbols per second)
    double sigma_h2 = 1.0;  ///< fading variance E{|h|^2}
    double sigma_n2 = 1.0;  ///< receiver noise variance
    double sigma_s2 = 1.0;  ///< primary-signal variance at the secondary receiver
    double theta = 0.1;     ///< QoS exponent, 1/bits
    double a = 0.9;         ///< Pr{busy -> idle}
    double b = 0.1;         ///< Pr{idle -> busy}

    /// Number of sensing samples N*B. Only valid after validate().
    int nb() const { return static_cast<int>(std::lround(N * B)); }

    /// Number of data symbols per frame, (T-N)*B - 1.
    double data_symbols() const { return (T - N) * B - 1.0; }

    /// Throws ConfigError if any invariant is violated. sigma_s2 may be zero
    /// (no primary signal); the other variances must be strictly positive.
    void validate() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Quoted power levels in dB reference the per-symbol energy against unit
/// noise. A frame spreads its budget P*T over T*B symbols, so the
/// frame-average power in the model's units is 10^(dB/10) * B.
inline double quoted_db_to_policy(double db, const SystemParams& params) {
    return db_to_linear(db) * params.B;
}

inline double policy_to_quoted_db(double policy_power, const SystemParams& params) {
    return linear_to_db(policy_power / params.B);
}

}  // namespace cogcap
