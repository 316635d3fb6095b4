#pragma once

#include <stdexcept>
#include <string>

namespace loewner {

/// Base of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed input data (non-finite entries, bad map data, schema violations).
class InputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "input"; }
};

/// Argument outside the domain of a map (e.g. a point not in the open unit ball).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Numerical parameter outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "parameter"; }
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double sigma_min)
        : Error(what), sigma_min_(sigma_min) {}
    double sigma_min() const noexcept { return sigma_min_; }
    const char* kind() const noexcept override { return "singular"; }

private:
    double sigma_min_;
};

/// ODE integration failure; carries the time at which the step size underflowed.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double time)
        : Error(what), time_(time) {}
    double time() const noexcept { return time_; }
    const char* kind() const noexcept override { return "integration"; }

private:
    double time_;
};

/// A computed quantity violates an invariant it must satisfy (e.g. Schwarz contraction).
class ConsistencyError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "consistency"; }
};

/// recover_chain did not converge within the horizon schedule.
class HorizonError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "horizon"; }
};

/// A required precondition (certificate, sampled bound) is missing or violated.
class PreconditionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "precondition"; }
};

class ConstructionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "construction"; }
};

/// A field or map evaluation failed inside a sampled check; the message names
/// the offending sample.
class EvaluationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "evaluation"; }
};

class NotFoundError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "not-found"; }
};

}  // namespace loewner
