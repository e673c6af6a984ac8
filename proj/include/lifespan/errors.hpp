#pragma once

#include <stdexcept>
#include <string>

namespace lifespan {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t <= 0, kappa <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Operation invoked with an exponent p outside the regime it is valid for.
struct WrongRegimeError : Error {
    using Error::Error;
};

/// The requested (profile, regime) combination is not covered by any case table.
struct InapplicableError : Error {
    using Error::Error;
};

/// A numerical routine stopped without reaching the requested tolerance.
struct AccuracyError : Error {
    AccuracyError(const std::string& what, double achieved_tol)
        : Error(what), achieved(achieved_tol) {}
    double achieved;  // best tolerance actually reached
};

/// The linear (free) evolution ceases to exist at or before the requested time.
struct LinearBlowupError : Error {
    LinearBlowupError(const std::string& what, double blowup_time)
        : Error(what), t_blowup(blowup_time) {}
    double t_blowup;
};

/// An implicit time step has no admissible root even after step-size reduction.
struct StepFailureError : Error {
    using Error::Error;
};

/// Malformed textual input (profile grammar, exponent grammar, CLI values).
struct ParseError : Error {
    using Error::Error;
};

}  // namespace lifespan
