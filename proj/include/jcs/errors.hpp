#pragma once

#include <stdexcept>
#include <string>

namespace jcs {

// Raised when a configuration document or CLI flag violates a parameter
// constraint. `line` is 1-based and 0 when the error is not tied to a line.
struct ConfigError : std::runtime_error {
    int line;
    explicit ConfigError(const std::string& msg, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "config line " + std::to_string(line_no) + ": " + msg
                                         : msg),
          line(line_no) {}
};

// Raised when a steady-state solve or a time integration cannot be trusted:
// factorization breakdown, residual above threshold, trace drift, or a
// non-stationary estimator tail. `metric` holds the offending number.
struct SolverError : std::runtime_error {
    double metric;
    explicit SolverError(const std::string& msg, double metric_value = 0.0)
        : std::runtime_error(msg), metric(metric_value) {}
};

// Raised when an observable that must be non-negative comes out negative
// beyond the clamping tolerance.
struct PositivityError : SolverError {
    using SolverError::SolverError;
};

}  // namespace jcs
