#pragma once

#include <stdexcept>
#include <string>

namespace tfpanel {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data, schema violation, or invalid configuration. CLI exit code 1.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Variable transform failed (e.g. log of a non-positive value under the
// strict policy).
class TransformError : public ValidationError {
public:
    explicit TransformError(const std::string& msg) : ValidationError(msg) {}
};

// Numerical failure inside an estimator or test. CLI exit code 2.
class EstimationError : public Error {
public:
    explicit EstimationError(const std::string& msg) : Error(msg) {}
};

// File or network failure. CLI exit code 3.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace tfpanel
