#include "expotail/legendre.hpp"

#include "expotail/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace expotail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_mgf_second_derivative(const Distribution& d, double theta) {
    switch (d.law()) {
    case Law::Exponential:
    case Law::Gamma: {
        const double q = 1.0 - theta;
        return d.shape() / (q * q);
    }
    case Law::Laplace: {
        const double t2 = theta * theta;
        const double q = 1.0 - t2;
        return 2.0 * (1.0 + t2) / (q * q);
    }
    }
    return kInf;
}

void require_above_mean(const Distribution& d, double t) {
    if (!(t > d.mean()) || !std::isfinite(t)) {
        throw DomainError("rate function is evaluated only for t > mean (" + std::to_string(d.mean()) +
                          "), got " + std::to_string(t));
    }
}

} // namespace

double log_mgf(const Distribution& d, double theta) {
    switch (d.law()) {
    case Law::Exponential:
    case Law::Gamma:
        return theta < 1.0 ? -d.shape() * std::log1p(-theta) : kInf;
    case Law::Laplace:
        return std::fabs(theta) < 1.0 ? -std::log1p(-theta * theta) : kInf;
    }
    return kInf;
}

double log_mgf_derivative(const Distribution& d, double theta) {
    switch (d.law()) {
    case Law::Exponential:
    case Law::Gamma:
        return theta < 1.0 ? d.shape() / (1.0 - theta) : kInf;
    case Law::Laplace:
        return std::fabs(theta) < 1.0 ? 2.0 * theta / (1.0 - theta * theta) : kInf;
    }
    return kInf;
}

LegendreResult rate_function(const Distribution& d, double t) {
    require_above_mean(d, t);
    switch (d.law()) {
    case Law::Exponential:
        return {t - 1.0 - std::log(t), 1.0 - 1.0 / t, true, 0};
    case Law::Gamma: {
        const double g = d.shape();
        const double r = t / g;
        return {g * (r - 1.0 - std::log(r)), 1.0 - g / t, true, 0};
    }
    case Law::Laplace:
        return rate_function_numeric(d, t);
    }
    return rate_function_numeric(d, t);
}

LegendreResult rate_function_numeric(const Distribution& d, double t) {
    require_above_mean(d, t);
    constexpr double tol = 1e-12;
    constexpr int max_iter = 200;

    // psi' is increasing on (0, 1) with psi'(0) = mean < t and psi'(1-) = +inf,
    // so the root is bracketed by [0, 1].
    double lo = 0.0;
    double hi = 1.0;
    double theta = 0.5;
    int it = 0;
    bool converged = false;
    for (; it < max_iter; ++it) {
        const double g = log_mgf_derivative(d, theta) - t;
        if (g > 0.0) hi = theta; else lo = theta;
        double next = theta - g / log_mgf_second_derivative(d, theta);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::fabs(next - theta);
        theta = next;
        if (step < tol || hi - lo < tol) {
            converged = true;
            ++it;
            break;
        }
    }
    return {t * theta - log_mgf(d, theta), theta, converged, it};
}

} // namespace expotail
