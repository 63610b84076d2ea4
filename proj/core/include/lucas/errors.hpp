#pragma once

#include <stdexcept>
#include <string>

namespace lucas {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter sets that fail validation, or endowments outside the admissible domain.
class InvalidParamsError : public Error {
public:
    using Error::Error;
};

// Failures inside the numerical kernels: step-size underflow, iteration budgets
// exhausted, lost sign changes, non-finite samples.
class NumericsError : public Error {
public:
    using Error::Error;
};

// Closed-form evaluation failures: vanishing denominators, divergent integrals,
// states leaving the positive orthant.
class EvaluationError : public Error {
public:
    using Error::Error;
};

// The saddle-path calibration could not pin down a unique interior labor share.
class CalibrationError : public Error {
public:
    using Error::Error;
};

// Run-configuration files that cannot be read or parsed.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace lucas
