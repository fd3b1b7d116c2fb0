#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lpball {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Raised for violated preconditions: bad dimensions, out-of-range
// parameters, malformed input files. Messages name the offending quantity.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a solve cannot proceed (non-finite objective, broken
// internal invariant).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Magnitudes at or below this are treated as exact zeros when forming
// the support / zero index sets.
inline constexpr double kZeroThreshold = 1e-14;

} // namespace lpball
