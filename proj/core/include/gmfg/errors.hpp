#pragma once

#include <stdexcept>
#include <string>

namespace gmfg {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed inputs: bad dimensions, out-of-range parameters, invalid specs.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment or solver configuration (e.g. lambda*eta >= 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Policy evaluation failure: zero action probability at a reachable state
/// while lambda > 0 (missing exploration mixing upstream).
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Metric failure, e.g. absolute-continuity violation in the KL metric.
class MetricError : public Error {
public:
    using Error::Error;
};

/// Solver runtime failure: NaN policies, invalid mirror step inputs.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace gmfg
