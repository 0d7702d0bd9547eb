#pragma once

#include <string>

#include "cogcap/cli/config.hpp"

namespace cogcap::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes: config/usage/I-O problems vs oracle failures from the
/// validate subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitOracleFailure = 3;

struct OutputOptions {
    std::string out_path;         ///< empty = "<subcommand>.csv" / ".json"
    std::string format = "csv";   ///< csv | json
};

/// Dispatches one subcommand (sense-roc, capacity, optimize, sweep-pd,
/// sweep-eta, eta-vs-pd, compare-estimators, simulate, validate), writes the
/// data file plus a JSON sidecar next to it, and returns the exit code.
int run(const std::string& subcommand, const RunConfig& config, const OutputOptions& options);

}  // namespace cogcap::cli
