#pragma once

#include <stdexcept>
#include <string>

namespace ftm {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A state fell outside the physical simplex (negative eigenvalue, bad trace).
class PositivityError : public Error {
public:
    using Error::Error;
};

// A scalar argument fell outside its admissible interval.
class RangeError : public Error {
public:
    using Error::Error;
};

// Two states were combined whose basis tags disagree.
class BasisError : public Error {
public:
    using Error::Error;
};

// An argument is outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// A frequency integral failed its panel-doubling convergence check.
class QuadratureError : public Error {
public:
    using Error::Error;
};

// log-gamma evaluated at a non-positive integer.
class PoleError : public Error {
public:
    using Error::Error;
};

// The requested step size cannot stably integrate the precomputed
// memory coefficients.
class StepSizeError : public Error {
public:
    using Error::Error;
};

// Sequence count 2^N exceeds the supported enumeration cap.
class CapError : public Error {
public:
    using Error::Error;
};

// Least-squares extraction of the coupling rate is not defined for the input.
class FitError : public Error {
public:
    using Error::Error;
};

// Config text could not be parsed; carries a 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// A parsed config value is invalid; carries the offending field name.
class ValidationError : public Error {
public:
    ValidationError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Solver/scenario combination that no implemented route covers.
class UnsupportedScenario : public Error {
public:
    using Error::Error;
};

} // namespace ftm
