#pragma once

#include <stdexcept>
#include <string>

namespace tpdl {

// Bad user-supplied parameters or config files.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Root solve failed to converge; carries the last bracket for post-mortems.
struct SolveError : std::runtime_error {
    double bracket_lo, bracket_hi;
    SolveError(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), bracket_lo(lo), bracket_hi(hi) {}
};

// An internal consistency check (identity, residual bound) was violated.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// State left the physically admissible region (density too close to vacuum).
struct VacuumError : std::runtime_error {
    double time;
    VacuumError(const std::string& msg, double t) : std::runtime_error(msg), time(t) {}
};

// Non-finite values appeared during time stepping.
struct BlowUpError : std::runtime_error {
    double time;
    BlowUpError(const std::string& msg, double t) : std::runtime_error(msg), time(t) {}
};

// Power-law fit could not be performed (too few points, non-positive data).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tpdl
