#pragma once

#include <stdexcept>
#include <string>

namespace cogcap {

/// Invalid configuration text or parameter set (bad key, bad value, broken invariant).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input that conditions on a zero-probability event (e.g. priors with a zero denominator).
struct DegenerateInput : std::domain_error {
    explicit DegenerateInput(const std::string& msg) : std::domain_error(msg) {}
};

/// Operation requested on a path that does not support it (e.g. true MMSE on the
/// closed-form effective-capacity path).
struct UnsupportedCombination : std::logic_error {
    explicit UnsupportedCombination(const std::string& msg) : std::logic_error(msg) {}
};

/// Not enough samples/frames for the requested estimate.
struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& msg) : std::runtime_error(msg) {}
};

/// Optimization problem with an empty feasible set.
struct InfeasibleProblem : std::runtime_error {
    explicit InfeasibleProblem(const std::string& msg) : std::runtime_error(msg) {}
};

/// Queue simulation with arrivals exceeding the mean service rate.
struct DivergentQueue : std::runtime_error {
    explicit DivergentQueue(const std::string& msg) : std::runtime_error(msg) {}
};

/// Internal numerical consistency violation (e.g. a radicand that should be nonnegative).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cogcap
