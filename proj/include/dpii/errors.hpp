#pragma once

#include <stdexcept>
#include <string>

namespace dpii {

/// Requested accuracy cannot be certified below the configured precision
/// ceiling, or an orbit cannot distinguish candidates at working precision.
class PrecisionExhausted : public std::runtime_error {
public:
    explicit PrecisionExhausted(const std::string& what)
        : std::runtime_error(what) {}
};

/// An adaptive loop (continued-fraction depth, quadrature nodes, ...) hit its
/// cap before two successive refinements agreed.
class ConvergenceFailure : public std::runtime_error {
public:
    explicit ConvergenceFailure(const std::string& what)
        : std::runtime_error(what) {}
};

/// The coarse scan of the shooting solver did not produce a consistent
/// two-sided classification of escaping orbits.
class CalibrationFailure : public std::runtime_error {
public:
    explicit CalibrationFailure(const std::string& what)
        : std::runtime_error(what) {}
};

/// 1 - a_n^2 vanished exactly at working precision while iterating.
class SingularStep : public std::runtime_error {
public:
    SingularStep(const std::string& what, long index)
        : std::runtime_error(what + " at index " + std::to_string(index)),
          index_(index) {}
    long index() const { return index_; }

private:
    long index_;
};

/// A computed reflection coefficient left (-1, 1): the moment sequence is not
/// positive definite at working precision.
class PositivityFailure : public std::runtime_error {
public:
    PositivityFailure(const std::string& what, long index)
        : std::runtime_error(what + " at index " + std::to_string(index)),
          index_(index) {}
    long index() const { return index_; }

private:
    long index_;
};

}  // namespace dpii
