#pragma once

#include <stdexcept>
#include <string>

namespace adiaudit {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument values (ranges, grids, thresholds).
struct ParameterError : Error {
    using Error::Error;
};

/// Malformed input files (sample tables, configs).
struct FormatError : Error {
    using Error::Error;
};

/// Spectrum too close to degenerate for gap-dividing quantities.
struct DegeneracyError : Error {
    DegeneracyError(const std::string& msg, double t) : Error(msg), time(t) {}
    double time;
};

/// Grid too coarse to track branches or resolve dynamics.
struct ResolutionError : Error {
    using Error::Error;
};

/// Integrator drift (norm, unitarity) beyond contract.
struct AccuracyError : Error {
    using Error::Error;
};

/// Two independent numerical routes disagree beyond tolerance.
struct ConsistencyError : Error {
    using Error::Error;
};

/// Operation called outside its stated premise.
struct PreconditionError : Error {
    using Error::Error;
};

/// Result would be dominated by a near-singular denominator.
struct ConditioningError : Error {
    using Error::Error;
};

}  // namespace adiaudit
