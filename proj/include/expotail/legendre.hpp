#pragma once

#include "expotail/core.hpp"

namespace expotail {

/// psi(theta) = log E exp(theta X) for one summand; +infinity outside the domain.
double log_mgf(const Distribution& d, double theta);

/// psi'(theta); +infinity outside the domain.
double log_mgf_derivative(const Distribution& d, double theta);

struct LegendreResult {
    double value;      // I(t)
    double theta_star; // maximizer
    bool converged;
    int iterations;
};

/// Cramer rate function I(t) = sup_{theta > 0} (t theta - psi(theta)) for t > mean.
/// Closed forms for Exponential and Gamma; Laplace goes through the numeric supremum.
/// Throws DomainError when t <= mean.
LegendreResult rate_function(const Distribution& d, double t);

/// Same supremum, always solved numerically: safeguarded Newton on psi'(theta) = t
/// with bisection fallback, tolerance 1e-12 on theta.
LegendreResult rate_function_numeric(const Distribution& d, double t);

} // namespace expotail
