#include "cogcap/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "cogcap/errors.hpp"

namespace cogcap::cli {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const std::int64_t v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

EstimatorKind parse_estimator(const std::string& key, std::string value) {
    if (!value.empty() && value.front() == '"' && value.back() == '"' && value.size() >= 2)
        value = value.substr(1, value.size() - 2);
    if (value == "mismatched") return EstimatorKind::MismatchedMMSE;
    if (value == "linear") return EstimatorKind::LinearMMSE;
    if (value == "true") return EstimatorKind::TrueMMSE;
    throw ConfigError("config key '" + key + "': expected mismatched, linear or true, got '" +
                      value + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const char* estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::MismatchedMMSE: return "mismatched";
        case EstimatorKind::LinearMMSE: return "linear";
        case EstimatorKind::TrueMMSE: return "true";
    }
    return "?";
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;

    using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
    auto dbl = [](double RunConfig::*field) {
        return Setter([field](RunConfig& c, const std::string& k, const std::string& v) {
            c.*field = parse_double(k, v);
        });
    };
    auto i64 = [](std::int64_t RunConfig::*field) {
        return Setter([field](RunConfig& c, const std::string& k, const std::string& v) {
            c.*field = parse_int(k, v);
        });
    };
    auto u64 = [](std::uint64_t RunConfig::*field) {
        return Setter([field](RunConfig& c, const std::string& k, const std::string& v) {
            const std::int64_t value = parse_int(k, v);
            if (value < 0) throw ConfigError("config key '" + k + "': must be nonnegative");
            c.*field = static_cast<std::uint64_t>(value);
        });
    };
    auto par = [](double SystemParams::*field) {
        return Setter([field](RunConfig& c, const std::string& k, const std::string& v) {
            c.params.*field = parse_double(k, v);
        });
    };

    const std::map<std::string, Setter> setters = {
        {"T", par(&SystemParams::T)},
        {"N", par(&SystemParams::N)},
        {"B", par(&SystemParams::B)},
        {"sigma_h2", par(&SystemParams::sigma_h2)},
        {"sigma_n2", par(&SystemParams::sigma_n2)},
        {"sigma_s2", par(&SystemParams::sigma_s2)},
        {"theta", par(&SystemParams::theta)},
        {"a", par(&SystemParams::a)},
        {"b", par(&SystemParams::b)},
        {"eta", dbl(&RunConfig::eta)},
        {"p_peak_db", dbl(&RunConfig::p_peak_db)},
        {"p_avg_db", dbl(&RunConfig::p_avg_db)},
        {"pd", dbl(&RunConfig::pd)},
        {"estimator",
         Setter([](RunConfig& c, const std::string& k, const std::string& v) {
             c.estimator = parse_estimator(k, v);
         })},
        {"r1", dbl(&RunConfig::r1)},
        {"r2", dbl(&RunConfig::r2)},
        {"p1_db", dbl(&RunConfig::p1_db)},
        {"p2_db", dbl(&RunConfig::p2_db)},
        {"seed", u64(&RunConfig::seed)},
        {"n_frames", u64(&RunConfig::n_frames)},
        {"block_len", u64(&RunConfig::block_len)},
        {"mc_prepass", u64(&RunConfig::mc_prepass)},
        {"dump_frames",
         Setter([](RunConfig& c, const std::string& k, const std::string& v) {
             c.dump_frames = parse_bool(k, v);
         })},
        {"sweep_min", dbl(&RunConfig::sweep_min)},
        {"sweep_max", dbl(&RunConfig::sweep_max)},
        {"sweep_points", i64(&RunConfig::sweep_points)},
        {"eta_min", dbl(&RunConfig::eta_min)},
        {"eta_max", dbl(&RunConfig::eta_max)},
        {"eta_points", i64(&RunConfig::eta_points)},
        {"compare_axis",
         Setter([](RunConfig& c, const std::string& k, const std::string& v) {
             if (v != "p_avg" && v != "pd")
                 throw ConfigError("config key '" + k + "': expected p_avg or pd, got '" + v +
                                   "'");
             c.compare_axis = v;
         })},
        {"r_min", dbl(&RunConfig::r_min)},
        {"r_max", dbl(&RunConfig::r_max)},
        {"r_points", i64(&RunConfig::r_points)},
        {"p_points", i64(&RunConfig::p_points)},
        {"validate_sp_draws", i64(&RunConfig::validate_sp_draws)},
        {"validate_frames", i64(&RunConfig::validate_frames)},
        {"validate_scenario_frames", i64(&RunConfig::validate_scenario_frames)},
    };

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        it->second(cfg, key, value);
    }

    cfg.params.validate();
    if (!(cfg.eta > 0.0 && cfg.eta < 1.0)) throw ConfigError("config key 'eta': must lie in (0,1)");
    if (!(cfg.pd > 0.0 && cfg.pd < 1.0)) throw ConfigError("config key 'pd': must lie in (0,1)");
    if (!std::isfinite(cfg.p_peak_db) || !std::isfinite(cfg.p_avg_db))
        throw ConfigError("config: power caps must be finite");
    if (!(cfg.r1 >= 0.0 && cfg.r2 >= 0.0)) throw ConfigError("config: rates must be nonnegative");
    if (cfg.p1_db > cfg.p_peak_db || cfg.p2_db > cfg.p_peak_db)
        throw ConfigError("config: p1_db/p2_db must respect p_peak_db");
    if (cfg.n_frames == 0) throw ConfigError("config key 'n_frames': must be positive");
    if (!(cfg.eta_min > 0.0 && cfg.eta_max < 1.0 && cfg.eta_min < cfg.eta_max))
        throw ConfigError("config: need 0 < eta_min < eta_max < 1");
    if (cfg.eta_points < 2) throw ConfigError("config key 'eta_points': need at least 2");
    if (!(cfg.r_min > 0.0 && cfg.r_max > cfg.r_min))
        throw ConfigError("config: need 0 < r_min < r_max");
    if (cfg.r_points < 8 || cfg.p_points < 8)
        throw ConfigError("config: r_points and p_points must be at least 8");
    if (cfg.validate_sp_draws < 1 || cfg.validate_frames < 10000 ||
        cfg.validate_scenario_frames < 10000)
        throw ConfigError("config: validation sizes too small");
    return cfg;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "T = " << fmt(c.params.T) << "\n";
    out << "N = " << fmt(c.params.N) << "\n";
    out << "B = " << fmt(c.params.B) << "\n";
    out << "sigma_h2 = " << fmt(c.params.sigma_h2) << "\n";
    out << "sigma_n2 = " << fmt(c.params.sigma_n2) << "\n";
    out << "sigma_s2 = " << fmt(c.params.sigma_s2) << "\n";
    out << "theta = " << fmt(c.params.theta) << "\n";
    out << "a = " << fmt(c.params.a) << "\n";
    out << "b = " << fmt(c.params.b) << "\n";
    out << "eta = " << fmt(c.eta) << "\n";
    out << "p_peak_db = " << fmt(c.p_peak_db) << "\n";
    out << "p_avg_db = " << fmt(c.p_avg_db) << "\n";
    out << "pd = " << fmt(c.pd) << "\n";
    out << "estimator = " << estimator_name(c.estimator) << "\n";
    out << "r1 = " << fmt(c.r1) << "\n";
    out << "r2 = " << fmt(c.r2) << "\n";
    out << "p1_db = " << fmt(c.p1_db) << "\n";
    out << "p2_db = " << fmt(c.p2_db) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "n_frames = " << c.n_frames << "\n";
    out << "block_len = " << c.block_len << "\n";
    out << "mc_prepass = " << c.mc_prepass << "\n";
    out << "dump_frames = " << (c.dump_frames ? "true" : "false") << "\n";
    out << "sweep_min = " << fmt(c.sweep_min) << "\n";
    out << "sweep_max = " << fmt(c.sweep_max) << "\n";
    out << "sweep_points = " << c.sweep_points << "\n";
    out << "eta_min = " << fmt(c.eta_min) << "\n";
    out << "eta_max = " << fmt(c.eta_max) << "\n";
    out << "eta_points = " << c.eta_points << "\n";
    out << "compare_axis = " << c.compare_axis << "\n";
    out << "r_min = " << fmt(c.r_min) << "\n";
    out << "r_max = " << fmt(c.r_max) << "\n";
    out << "r_points = " << c.r_points << "\n";
    out << "p_points = " << c.p_points << "\n";
    out << "validate_sp_draws = " << c.validate_sp_draws << "\n";
    out << "validate_frames = " << c.validate_frames << "\n";
    out << "validate_scenario_frames = " << c.validate_scenario_frames << "\n";
    return out.str();
}

}  // namespace cogcap::cli
