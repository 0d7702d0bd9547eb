#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cogcap/effcap.hpp"

namespace cogcap {

/// One simulated frame: primary-user state, sensing decision, fading draw,
/// ON/OFF outcome and the bits served.
struct FrameRecord {
    std::uint64_t index;
    bool pu_busy;
    bool detected_busy;
    int scenario;         ///< 1..4, consistent with (pu_busy, detected_busy)
    double z;             ///< realized |w|^2 = |h_hat|^2 / sigma_hhat^2
    bool on;
    double service_bits;  ///< T*r1, T*r2 or 0
};

/// Inputs of one frame-level simulation run.
struct SimConfig {
    std::uint64_t n_frames;
    std::uint64_t seed;
    SystemParams params;
    RatePolicy rates;
    PowerPolicy powers;
    SensingOperatingPoint sensing;
    EstimatorKind kind;
    /// Sample count of the true-MMSE variance pre-pass (ignored otherwise).
    std::uint64_t mc_prepass_samples = 200000;
};

/// Simulates the PU chain, sensing decisions, block fading, training,
/// estimation and the ON/OFF service process. Reproducible per seed;
/// each randomness source (PU chain, sensing, fading, noise) draws from its
/// own stream, so changing one leaves the others' sequences intact.
std::vector<FrameRecord> simulate_frames(const SimConfig& config);

/// Batch-means estimate of the effective capacity with a jackknife error.
struct EffCapEstimate {
    double value;      ///< bits/s/Hz
    double std_error;  ///< jackknife standard error of `value`
    std::size_t n_blocks;
    std::size_t block_len;
};

/// Estimates -log E{e^(-theta S)}/(theta T B) from non-overlapping blocks of
/// frames. block_len 0 picks max(50, n/400); at least 200 blocks of at least
/// 50 frames are required (throws InsufficientData otherwise).
EffCapEstimate empirical_effective_capacity(std::span<const FrameRecord> trajectory, double theta,
                                            double T, double B, std::size_t block_len = 0);

/// Result of the queue-tail slope fit.
struct QueueTailFit {
    bool fitted;         ///< false when the tail window is empty/degenerate
    double theta_hat;    ///< fitted decay rate of log Pr{Q >= q}
    std::size_t points;  ///< number of (q, log Pr) points in the fit
};

/// Feeds constant arrivals (bits/s) through the recorded service process and
/// fits the exponential decay rate of the queue-length tail over the
/// probability window [1e-4, 1e-1]. Throws DivergentQueue when the arrival
/// rate exceeds the trajectory's mean service rate.
QueueTailFit queue_tail_exponent(std::span<const FrameRecord> trajectory, double arrival_rate_bps,
                                 const SystemParams& params);

}  // namespace cogcap
