#pragma once

#include <stdexcept>
#include <string>

namespace ergo {

/// Bad arguments: shape mismatch, non-finite entries, out-of-range sizes.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested problem exceeds a hard size cap.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Ground state (or Fermi level) is degenerate within tolerance.
class DegeneracyError : public std::runtime_error {
public:
    DegeneracyError(const std::string& what, double gap)
        : std::runtime_error(what), gap_(gap) {}
    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

/// Iterative solver ran out of iterations. Carries the best estimate so far.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double residual)
        : std::runtime_error(what), best_(best_estimate), residual_(residual) {}
    double best_estimate() const noexcept { return best_; }
    double residual() const noexcept { return residual_; }

private:
    double best_;
    double residual_;
};

/// Nonlinear fit failed from every starting point.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scan file. Line numbers are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace ergo
