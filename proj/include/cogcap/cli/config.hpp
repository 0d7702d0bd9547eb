#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "cogcap/estimation.hpp"
#include "cogcap/params.hpp"

namespace cogcap::cli {

/// Fully-resolved run configuration. Defaults reproduce the baseline
/// parameter set (T=0.1 s, N=0.01 s, B=1000 Hz, unit variances, theta=0.1,
/// a=0.9, b=0.1, eta=0.1, 10 dB peak cap).
struct RunConfig {
    SystemParams params{};

    double eta = 0.1;
    double p_peak_db = 10.0;
    double p_avg_db = 0.0;
    double pd = 0.92;  ///< detection-probability operating point
    EstimatorKind estimator = EstimatorKind::MismatchedMMSE;

    // Fixed-rate / fixed-power inputs (capacity, simulate).
    double r1 = 100.0;
    double r2 = 100.0;
    double p1_db = 0.0;
    double p2_db = 0.0;

    std::uint64_t seed = 1;
    std::uint64_t n_frames = 200000;
    std::uint64_t block_len = 0;  ///< 0 = automatic
    std::uint64_t mc_prepass = 200000;
    bool dump_frames = false;

    // Sweep axis; NaN / nonpositive points = per-subcommand default.
    double sweep_min = std::numeric_limits<double>::quiet_NaN();
    double sweep_max = std::numeric_limits<double>::quiet_NaN();
    std::int64_t sweep_points = -1;

    // Inner training-fraction grid of eta-vs-pd.
    double eta_min = 0.02;
    double eta_max = 0.40;
    std::int64_t eta_points = 39;

    // Sweep variable of compare-estimators: "p_avg" (dB axis) or "pd".
    std::string compare_axis = "p_avg";

    // Optimizer grid.
    double r_min = 1e-3;
    double r_max = 20000.0;
    std::int64_t r_points = 20;
    std::int64_t p_points = 13;

    // Validation-suite sizes.
    std::int64_t validate_sp_draws = 1000;
    std::int64_t validate_frames = 200000;
    std::int64_t validate_scenario_frames = 1000000;

    // Quoted dB levels are per-symbol referenced; policy units carry the
    // frame-energy scale (see quoted_db_to_policy).
    double p_peak_policy() const { return quoted_db_to_policy(p_peak_db, params); }
    double p_avg_policy() const { return quoted_db_to_policy(p_avg_db, params); }
    double p1_policy() const { return quoted_db_to_policy(p1_db, params); }
    double p2_policy() const { return quoted_db_to_policy(p2_db, params); }
};

/// Parses flat `key = value` text (# comments, blank lines allowed) and
/// validates every invariant. Unknown keys, type mismatches and invariant
/// violations throw ConfigError naming the offending key.
RunConfig parse_config(std::string_view text);

/// Re-serializes a config to the parse_config format with full double
/// precision, so parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

const char* estimator_name(EstimatorKind kind);

}  // namespace cogcap::cli
