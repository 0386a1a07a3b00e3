#pragma once

#include <stdexcept>
#include <string>

namespace isslab {

/// Bad user input: invalid parameter values, incompatible scenario data,
/// malformed configuration. Maps to exit code 2 in the CLI.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Grid/shape mismatch between operands (different resolutions, too few nodes).
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Base class for runtime failures inside a time stepper or kernel solve.
/// Maps to exit code 3 in the CLI.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// The state left the finite range (NaN or |u| beyond the overflow guard).
class BlowUpError : public SolverError {
public:
    BlowUpError(const std::string& what, double time) : SolverError(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// Step-size restriction violated; the caller should reduce dt.
class StepSizeError : public SolverError {
public:
    StepSizeError(const std::string& what, double time) : SolverError(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// An iterative solve did not reach its stopping tolerance.
class ConvergenceError : public SolverError {
public:
    ConvergenceError(const std::string& what, double residual)
        : SolverError(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

} // namespace isslab
