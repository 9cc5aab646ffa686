#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fanolab {

/// Base class for every error raised by the library. The pipeline catches
/// these, records the failing stage and exits nonzero.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

/// Non-finite or otherwise malformed input to a numerical operation.
class InputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "InputError"; }
};

/// Model parameters violate a < c orientation (fiber must collapse first).
class ModelOrientationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ModelOrientationError"; }
};

/// Inconsistent model data, e.g. a section family whose exponents leave
/// a pole on the fiber.
class ModelInconsistencyError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ModelInconsistencyError"; }
};

/// A boundary limit or other regularity requirement failed.
class ModelRegularityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ModelRegularityError"; }
};

class PositivityError : public Error {
public:
    PositivityError(const std::string& what, double worst, double x_fiber, double x_base)
        : Error(what), worst_eigenvalue(worst), x_f(x_fiber), x_b(x_base) {}
    const char* kind() const noexcept override { return "PositivityError"; }

    double worst_eigenvalue;
    double x_f;
    double x_b;
};

/// The right side of a degenerate Poisson problem does not integrate to zero.
class SolvabilityError : public Error {
public:
    SolvabilityError(const std::string& what, double defect_integral)
        : Error(what), defect(defect_integral) {}
    const char* kind() const noexcept override { return "SolvabilityError"; }

    double defect;
};

struct NewtonStep {
    int iteration = 0;
    double residual_norm = 0.0;
    double step_norm = 0.0;
    double damping = 1.0;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::vector<NewtonStep> steps)
        : Error(what), trace(std::move(steps)) {}
    const char* kind() const noexcept override { return "NonConvergence"; }

    std::vector<NewtonStep> trace;
};

/// A caller-supplied contract (e.g. Jacobian consistency) does not hold.
class ContractViolation : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ContractViolation"; }
};

/// The residual-route curvature form is not a pullback from the base.
class PullbackStructureError : public Error {
public:
    PullbackStructureError(const std::string& what, double defect_value)
        : Error(what), defect(defect_value) {}
    const char* kind() const noexcept override { return "PullbackStructureError"; }

    double defect;
};

class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ConfigError"; }
};

/// A report file could not be written.
class IoError : public Error {
public:
    IoError(const std::string& what, std::string file) : Error(what), path(std::move(file)) {}
    const char* kind() const noexcept override { return "IoError"; }

    std::string path;
};

}  // namespace fanolab
