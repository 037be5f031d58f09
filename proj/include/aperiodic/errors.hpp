#pragma once

#include <stdexcept>
#include <string>

namespace aperiodic {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration or malformed input.  The CLI maps these to exit code 2.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// A requested computation could not be completed (maps to exit code 1).
class ComputationError : public Error {
public:
    explicit ComputationError(const std::string& msg) : Error(msg) {}
};

// Iterative estimate failed to settle; carries the last two estimates so the
// caller can judge how far off it was.
class ConvergenceError : public ComputationError {
public:
    ConvergenceError(const std::string& msg, double previous, double last)
        : ComputationError(msg), previous_estimate(previous), last_estimate(last) {}
    double previous_estimate;
    double last_estimate;
};

// Adaptive grid or step-size refinement hit its limit.
class RefinementError : public ComputationError {
public:
    explicit RefinementError(const std::string& msg) : ComputationError(msg) {}
};

// A query reached outside the populated part of a finite structure.
class WindowError : public InputError {
public:
    explicit WindowError(const std::string& msg) : InputError(msg) {}
};

// A structurally valid request outside the supported parameter range
// (alphabet too large for the dense eigensolver, module rank > 2, ...).
class UnsupportedError : public InputError {
public:
    explicit UnsupportedError(const std::string& msg) : InputError(msg) {}
};

}  // namespace aperiodic
