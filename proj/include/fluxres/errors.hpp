#pragma once

#include <stdexcept>
#include <string>

namespace fluxres {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed config, out-of-range field, bad drive table.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// omega^2(t) <= 0 somewhere the model was asked to evaluate.
class NonPositiveFrequencySquared : public Error {
public:
    NonPositiveFrequencySquared(double t, double omega_sq, const std::string &what)
        : Error(what), t_(t), omega_sq_(omega_sq) {}

    NonPositiveFrequencySquared(double t, double omega_sq);

    double time() const noexcept { return t_; }
    double omega_sq() const noexcept { return omega_sq_; }

private:
    double t_;
    double omega_sq_;
};

/// Step-size underflow or a non-finite state in the integrator.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// Fewer upward zero crossings than the requested cycle needs.
class InsufficientCycles : public Error {
public:
    using Error::Error;
};

/// Fewer than two samples inside the requested window.
class EmptyWindow : public Error {
public:
    using Error::Error;
};

/// The optimizer prescan found no variation in the objective.
class FlatObjective : public Error {
public:
    using Error::Error;
};

}  // namespace fluxres
