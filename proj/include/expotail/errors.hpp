#pragma once

#include <stdexcept>
#include <string>

namespace expotail {

/// Argument outside the accepted set (empty weights, nonpositive weight, bad probability).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument in range for the type but outside the region where the quantity is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation requested for a summand law it does not cover (e.g. a nonnegativity result on Laplace sums).
class UnsupportedLaw : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative routine stopped without meeting its tolerance.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, double last_estimate, double error_estimate)
        : std::runtime_error(what), last_estimate_(last_estimate), error_estimate_(error_estimate) {}

    double last_estimate() const noexcept { return last_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double last_estimate_;
    double error_estimate_;
};

} // namespace expotail
