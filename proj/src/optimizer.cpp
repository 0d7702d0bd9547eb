#include "cogcap/optimizer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cogcap/errors.hpp"

namespace cogcap::optimizer {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

// Index-based work sharing; item i's result is a pure function of i, so the
// merged output does not depend on the thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    threads = std::clamp<int>(threads, 1, static_cast<int>(n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    body(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct Candidate {
    std::array<double, 4> x;  // p1, p2, r1, r2 -- tie-break order
    double value;
};

// Strictly better objective, or equal objective with lexicographically
// smaller (p1, p2, r1, r2).
bool better(const Candidate& lhs, const Candidate& rhs) {
    if (lhs.value != rhs.value) return lhs.value > rhs.value;
    return lhs.x < rhs.x;
}

class Objective {
public:
    explicit Objective(const OptimizationProblem& problem) : problem_(problem) {}

    double operator()(double p1, double p2, double r1, double r2) const {
        PowerPolicy powers{p1, p2, problem_.eta, problem_.p_avg, problem_.p_peak};
        const RatePolicy rates{r1, r2};
        return effcap::effective_capacity(problem_.params.theta, rates, powers, problem_.sensing,
                                          problem_.kind, problem_.params)
            .value;
    }

    double eval(const std::array<double, 4>& x) const { return (*this)(x[0], x[1], x[2], x[3]); }

private:
    const OptimizationProblem& problem_;
};

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i) v[i] = lo * std::exp(ratio * i / (n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

// Feasible interval of one coordinate given the other three. Power bounds
// come from the peak cap and the average-interference half-plane.
struct Interval {
    double lo, hi;
};

Interval coordinate_interval(const OptimizationProblem& pr, const std::array<double, 4>& x,
                             int coord) {
    const double pd = pr.sensing.p_d;
    switch (coord) {
        case 0: {
            double hi = pr.p_peak;
            if (pd > 0.0) hi = std::min(hi, (pr.p_avg - (1.0 - pd) * x[1]) / pd);
            return {0.0, std::max(0.0, hi)};
        }
        case 1: {
            double hi = pr.p_peak;
            if (pd < 1.0) hi = std::min(hi, (pr.p_avg - pd * x[0]) / (1.0 - pd));
            return {0.0, std::max(0.0, hi)};
        }
        default:
            return {pr.grid.r_min, pr.grid.r_max};
    }
}

// Golden-section maximization over [lo, hi]; ties keep the lower subinterval
// so the refined coordinate drifts toward smaller values on flat stretches.
// Also evaluates both interval endpoints.
void refine_coordinate(const Objective& f, Candidate& best, int coord, Interval iv, double tol) {
    auto value_at = [&](double t) {
        std::array<double, 4> x = best.x;
        x[coord] = t;
        return Candidate{x, f.eval(x)};
    };
    auto consider = [&](const Candidate& c) {
        if (better(c, best)) best = c;
    };

    consider(value_at(iv.lo));
    if (iv.hi > iv.lo) consider(value_at(iv.hi));

    double a = iv.lo, b = iv.hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    Candidate c1 = value_at(x1);
    Candidate c2 = value_at(x2);
    consider(c1);
    consider(c2);
    while (b - a > tol) {
        if (c1.value >= c2.value) {
            b = x2;
            x2 = x1;
            c2 = c1;
            x1 = b - kInvPhi * (b - a);
            c1 = value_at(x1);
            consider(c1);
        } else {
            a = x1;
            x1 = x2;
            c1 = c2;
            x2 = a + kInvPhi * (b - a);
            c2 = value_at(x2);
            consider(c2);
        }
    }
}

}  // namespace

Optimum optimize(const OptimizationProblem& problem) {
    problem.params.validate();
    if (!(problem.p_avg > 0.0))
        throw InfeasibleProblem("optimize: p_avg must be positive for a nonempty feasible set");
    if (!(problem.p_peak > 0.0)) throw ConfigError("optimize: p_peak must be positive");
    if (!(problem.eta > 0.0 && problem.eta < 1.0))
        throw ConfigError("optimize: eta must lie in (0,1)");
    const SearchGrid& g = problem.grid;
    if (g.r_points < 8 || g.power_points < 8)
        throw ConfigError("optimize: need at least 8 grid points per axis");
    if (!(g.r_min > 0.0 && g.r_max > g.r_min))
        throw ConfigError("optimize: need 0 < r_min < r_max");

    const Objective f(problem);
    const double pd = problem.sensing.p_d;

    const double p1_cap =
        pd > 0.0 ? std::min(problem.p_peak, problem.p_avg / pd) : problem.p_peak;
    const double p2_cap =
        pd < 1.0 ? std::min(problem.p_peak, problem.p_avg / (1.0 - pd)) : problem.p_peak;
    const auto p1_grid = linspace(0.0, p1_cap, g.power_points);
    const auto p2_grid = linspace(0.0, p2_cap, g.power_points);
    const auto r_grid = logspace(g.r_min, g.r_max, g.r_points);

    // Coarse scan in tie-break order; strict improvement keeps the first
    // (lexicographically smallest) maximizer per slot. The top slots seed
    // independent refinements, since the landscape can hold several basins
    // (e.g. r1-active vs r1-silent regimes).
    constexpr int kStarts = 6;
    std::vector<Candidate> seeds;
    auto offer_seed = [&](const Candidate& c) {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            if (better(c, seeds[i])) {
                seeds.insert(seeds.begin() + i, c);
                if (seeds.size() > kStarts) seeds.pop_back();
                return;
            }
        }
        if (seeds.size() < kStarts) seeds.push_back(c);
    };
    for (double p1 : p1_grid) {
        for (double p2 : p2_grid) {
            if (pd * p1 + (1.0 - pd) * p2 > problem.p_avg * (1.0 + 1e-12)) continue;
            for (double r1 : r_grid)
                for (double r2 : r_grid) offer_seed({{p1, p2, r1, r2}, f(p1, p2, r1, r2)});
        }
    }
    Candidate best = seeds.front();

    if (g.refine) {
        const double p1_step = p1_cap / (g.power_points - 1);
        const double p2_step = p2_cap / (g.power_points - 1);
        const double r_ratio = std::pow(g.r_max / g.r_min, 1.0 / (g.r_points - 1));

        for (const Candidate& seed : seeds) {
            Candidate current = seed;
            auto consider_point = [&](int coord, double t) {
                std::array<double, 4> x = current.x;
                x[coord] = t;
                const Candidate c{x, f.eval(x)};
                if (better(c, current)) current = c;
            };

            for (int cycle = 0; cycle < g.max_cycles; ++cycle) {
                const Candidate before = current;
                for (int coord = 0; coord < 4; ++coord) {
                    const Interval feas = coordinate_interval(problem, current.x, coord);
                    Interval bracket;
                    double tol;
                    if (coord < 2) {
                        const double step = coord == 0 ? p1_step : p2_step;
                        bracket = {current.x[coord] - step, current.x[coord] + step};
                        tol = g.power_tol;
                    } else {
                        bracket = {current.x[coord] / r_ratio, current.x[coord] * r_ratio};
                        tol = g.rate_tol;
                    }
                    bracket.lo = std::max(bracket.lo, feas.lo);
                    bracket.hi = std::min(bracket.hi, feas.hi);
                    if (bracket.hi > bracket.lo) refine_coordinate(f, current, coord, bracket, tol);
                    // Exact feasible-boundary candidates (peak cap, constraint line).
                    consider_point(coord, feas.lo);
                    consider_point(coord, feas.hi);
                }
                bool moved = false;
                for (int coord = 0; coord < 4; ++coord) {
                    const double tol = coord < 2 ? g.power_tol : g.rate_tol;
                    if (std::abs(current.x[coord] - before.x[coord]) > tol) moved = true;
                }
                if (!moved && !(current.value > before.value)) break;
            }

            // Full-interval golden-section polish; accepts improvements only.
            for (int cycle = 0; cycle < 3; ++cycle) {
                for (int coord = 0; coord < 4; ++coord) {
                    const Interval feas = coordinate_interval(problem, current.x, coord);
                    const double tol = coord < 2 ? g.power_tol : g.rate_tol;
                    if (feas.hi > feas.lo) refine_coordinate(f, current, coord, feas, tol);
                }
            }
            if (better(current, best)) best = current;
        }
    }

    Optimum opt;
    opt.p1 = best.x[0];
    opt.p2 = best.x[1];
    opt.r1 = best.x[2];
    opt.r2 = best.x[3];
    opt.eff_cap = best.value;
    opt.slack_avg = problem.p_avg - (pd * opt.p1 + (1.0 - pd) * opt.p2);
    opt.slack_peak1 = problem.p_peak - opt.p1;
    opt.slack_peak2 = problem.p_peak - opt.p2;
    return opt;
}

SweepTable sweep_pd(std::span<const double> pd_grid, const OptimizationProblem& tmpl) {
    SweepTable table;
    table.columns = {"pd", "pf", "eff_cap", "r1_star", "r2_star", "p1_star_lin", "p2_star_lin"};
    table.rows.resize(pd_grid.size());
    parallel_for(pd_grid.size(), tmpl.sweep_threads, [&](std::size_t i) {
        OptimizationProblem problem = tmpl;
        problem.sensing = sensing::operating_point_from_pd(pd_grid[i], tmpl.params);
        const Optimum opt = optimize(problem);
        table.rows[i] = {problem.sensing.p_d, problem.sensing.p_f, opt.eff_cap, opt.r1,
                         opt.r2, opt.p1, opt.p2};
    });
    return table;
}

EtaSweep sweep_eta(std::span<const double> eta_grid, const OptimizationProblem& tmpl) {
    if (eta_grid.empty()) throw ConfigError("sweep_eta: empty grid");
    for (double eta : eta_grid)
        if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("sweep_eta: eta values must lie in (0,1)");

    EtaSweep sweep;
    sweep.table.columns = {"eta", "eff_cap", "r1_star", "r2_star", "p1_star_lin", "p2_star_lin"};
    sweep.table.rows.resize(eta_grid.size());
    parallel_for(eta_grid.size(), tmpl.sweep_threads, [&](std::size_t i) {
        OptimizationProblem problem = tmpl;
        problem.eta = eta_grid[i];
        const Optimum opt = optimize(problem);
        sweep.table.rows[i] = {eta_grid[i], opt.eff_cap, opt.r1, opt.r2, opt.p1, opt.p2};
    });
    sweep.eta_star = eta_grid.front();
    sweep.eff_cap_star = -1.0;
    for (const auto& row : sweep.table.rows) {
        if (row[1] > sweep.eff_cap_star) {
            sweep.eff_cap_star = row[1];
            sweep.eta_star = row[0];
        }
    }
    return sweep;
}

SweepTable optimal_eta_vs_pd(std::span<const double> pd_grid, std::span<const double> eta_grid,
                             const OptimizationProblem& tmpl) {
    SweepTable table;
    table.columns = {"pd", "eta_star"};
    table.rows.resize(pd_grid.size());
    parallel_for(pd_grid.size(), tmpl.sweep_threads, [&](std::size_t i) {
        OptimizationProblem problem = tmpl;
        problem.sweep_threads = 1;
        problem.sensing = sensing::operating_point_from_pd(pd_grid[i], tmpl.params);
        table.rows[i] = {pd_grid[i], sweep_eta(eta_grid, problem).eta_star};
    });
    return table;
}

SweepTable compare_estimators(CompareAxis axis, std::span<const double> grid,
                              const OptimizationProblem& tmpl) {
    SweepTable table;
    table.columns = {axis == CompareAxis::PAvgDb ? "p_avg_db" : "pd", "eff_cap_mismatched",
                     "eff_cap_linear"};
    table.rows.resize(grid.size());
    parallel_for(grid.size(), tmpl.sweep_threads, [&](std::size_t i) {
        OptimizationProblem problem = tmpl;
        if (axis == CompareAxis::PAvgDb)
            problem.p_avg = quoted_db_to_policy(grid[i], tmpl.params);
        else
            problem.sensing = sensing::operating_point_from_pd(grid[i], tmpl.params);

        problem.kind = EstimatorKind::MismatchedMMSE;
        const double mismatched = optimize(problem).eff_cap;
        problem.kind = EstimatorKind::LinearMMSE;
        const double linear = optimize(problem).eff_cap;
        table.rows[i] = {grid[i], mismatched, linear};
    });
    return table;
}

double p_avg_from_interference(double i_avg, double mean_gain) {
    if (!(i_avg > 0.0 && std::isfinite(i_avg)))
        throw std::domain_error("p_avg_from_interference: interference cap must be positive");
    if (!(mean_gain > 0.0 && std::isfinite(mean_gain)))
        throw std::domain_error("p_avg_from_interference: mean gain must be positive");
    return i_avg / mean_gain;
}

}  // namespace cogcap::optimizer
