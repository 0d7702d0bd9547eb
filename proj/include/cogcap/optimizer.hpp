#pragma once

#include <span>
#include <string>
#include <vector>

#include "cogcap/effcap.hpp"

namespace cogcap {

/// Grid resolutions and refinement tolerances of the rate/power search.
struct SearchGrid {
    double r_min = 1e-3;     ///< bits/s, lower rate bound (log-spaced axis)
    double r_max = 20000.0;  ///< bits/s, upper rate bound
    int r_points = 20;       ///< coarse points per rate axis (>= 8)
    int power_points = 13;   ///< coarse points per power axis (>= 8)
    double rate_tol = 1e-3;  ///< golden-section stop width, bits/s
    double power_tol = 1e-4; ///< golden-section stop width, linear power
    int max_cycles = 40;     ///< cyclic coordinate-descent cap
    bool refine = true;      ///< false stops after the coarse grid
};

/// One constrained effective-capacity maximization over (r1, r2, P1, P2).
struct OptimizationProblem {
    SystemParams params;
    SensingOperatingPoint sensing;
    EstimatorKind kind = EstimatorKind::MismatchedMMSE;
    double p_avg;   ///< average-interference power cap, linear
    double p_peak;  ///< peak power cap, linear
    double eta;     ///< training fraction, fixed during the solve
    SearchGrid grid;
    /// Sweep points are independent; results merge by grid index, so the
    /// output is identical for any thread count.
    int sweep_threads = 1;
};

/// Argmax of one solve with the constraint residuals at the solution.
struct Optimum {
    double r1;       ///< bits/s when detected busy
    double r2;       ///< bits/s when detected idle
    double p1;       ///< linear power when detected busy
    double p2;       ///< linear power when detected idle
    double eff_cap;  ///< bits/s/Hz at the argmax
    double slack_avg;    ///< p_avg - (P_d p1 + (1-P_d) p2)
    double slack_peak1;  ///< p_peak - p1
    double slack_peak2;  ///< p_peak - p2
};

/// Column-named numeric table handed to the CLI for CSV/JSON emission.
struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

namespace optimizer {

/// Deterministic maximization of the effective capacity: coarse grid over the
/// feasible power region and log-spaced rates, then cyclic per-coordinate
/// golden-section refinement with explicit boundary candidates. Ties break
/// toward the smallest (P1, P2, r1, r2).
Optimum optimize(const OptimizationProblem& problem);

/// Re-solves per detection probability; columns
/// pd, pf, eff_cap, r1_star, r2_star, p1_star_lin, p2_star_lin.
SweepTable sweep_pd(std::span<const double> pd_grid, const OptimizationProblem& tmpl);

struct EtaSweep {
    SweepTable table;     ///< eta, eff_cap, r1_star, r2_star, p1_star_lin, p2_star_lin
    double eta_star;      ///< argmax eta
    double eff_cap_star;  ///< value at the argmax
};

/// Re-solves all four decision variables per training fraction.
EtaSweep sweep_eta(std::span<const double> eta_grid, const OptimizationProblem& tmpl);

/// Best training fraction per detection probability; columns pd, eta_star.
SweepTable optimal_eta_vs_pd(std::span<const double> pd_grid, std::span<const double> eta_grid,
                             const OptimizationProblem& tmpl);

enum class CompareAxis { PAvgDb, Pd };

/// Mismatched vs linear MMSE optimum side by side along a p_avg (dB) or P_d
/// grid; columns <axis>, eff_cap_mismatched, eff_cap_linear.
SweepTable compare_estimators(CompareAxis axis, std::span<const double> grid,
                              const OptimizationProblem& tmpl);

/// Average-power cap that meets an interference cap given the mean secondary
/// transmitter -> primary receiver channel gain.
double p_avg_from_interference(double i_avg, double mean_gain);

}  // namespace optimizer
}  // namespace cogcap
