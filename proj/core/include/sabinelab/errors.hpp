#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sabinelab {

/// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters outside a type invariant; the message names the violated rule.
class ConfigError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// A value too large (or too small) for a double.  log_magnitude is ln|value|.
class ScaledOverflow : public NumericalError {
public:
    ScaledOverflow(const std::string& what, double log_magnitude)
        : NumericalError(what), log_magnitude_(log_magnitude) {}
    double log_magnitude() const noexcept { return log_magnitude_; }

private:
    double log_magnitude_;
};

/// Billiard map requested at (or within 1e-12 of) the glancing set.
class GlancingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
public:
    NoConvergence(const std::string& what, std::vector<double> trace)
        : NumericalError(what), trace_(std::move(trace)) {}
    /// |step| per Newton iteration.
    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

/// Argument-principle count disagrees with the roots found in a cell.
class IncompleteCell : public NumericalError {
public:
    IncompleteCell(const std::string& what, double re_lo, double re_hi, double im_lo,
                   double im_hi, int n)
        : NumericalError(what), re_lo(re_lo), re_hi(re_hi), im_lo(im_lo), im_hi(im_hi), n(n) {}
    double re_lo, re_hi, im_lo, im_hi;
    int n;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace sabinelab
