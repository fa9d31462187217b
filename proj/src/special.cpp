#include "expotail/special.hpp"

#include "expotail/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace expotail {

namespace {

void require_nonnegative(double u, const char* what) {
    if (!(u >= 0.0) || std::isnan(u)) {
        throw InvalidInput(std::string(what) + " requires a nonnegative argument, got " + std::to_string(u));
    }
}

double sup_objective(double theta, double u) {
    return theta * u + std::log1p(-theta * theta);
}

// log of x^a e^{-x} / Gamma(a), the common prefactor of both expansions.
double log_prefactor(double a, double x) {
    return a * std::log(x) - x - std::lgamma(a);
}

// log P(a, x) by the power series; converges quickly for x < a + 1.
double log_lower_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return log_prefactor(a, x) + std::log(sum);
}

// log Q(a, x) by the Legendre continued fraction (modified Lentz); for x >= a + 1.
double log_upper_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return log_prefactor(a, x) + std::log(h);
}

} // namespace

double h_closed(double u) {
    require_nonnegative(u, "h_closed");
    if (std::isinf(u)) return u;
    // d = sqrt(1+u^2) - 1 without cancellation; h = d - log1p(d/2).
    const double s = std::hypot(1.0, u);
    const double d = u < 1.0 ? u * u / (1.0 + s) : s - 1.0;
    return d - std::log1p(0.5 * d);
}

double h_argmax(double u) {
    require_nonnegative(u, "h_argmax");
    const double s = std::hypot(1.0, u);
    return u < 1.0 ? u / (1.0 + s) : (s - 1.0) / u;
}

SupResult h_sup(double u) {
    if (!(u > 0.0) || !std::isfinite(u)) {
        throw InvalidInput("h_sup requires a finite u > 0, got " + std::to_string(u));
    }
    constexpr double inv_phi = 0.6180339887498948482;
    constexpr double tol = 1e-14;
    constexpr int max_iter = 200;

    double lo = 0.0;
    double hi = 1.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = sup_objective(x1, u);
    double f2 = sup_objective(x2, u);
    int it = 0;
    while (hi - lo > tol) {
        if (++it > max_iter) {
            const double mid = 0.5 * (lo + hi);
            throw NumericFailure("h_sup: golden-section search did not converge", mid, hi - lo);
        }
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = sup_objective(x2, u);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = sup_objective(x1, u);
        }
    }
    const double theta = f1 > f2 ? x1 : x2;
    return {std::max(f1, f2), theta, it};
}

double gaussian_tail_lower(double u) {
    require_nonnegative(u, "gaussian_tail_lower");
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * u / (u * u + 1.0) * std::exp(-0.5 * u * u);
}

double gaussian_tail_lower_simple(double u) {
    if (!(u >= 1.0)) {
        throw InvalidInput("gaussian_tail_lower_simple requires u >= 1, got " + std::to_string(u));
    }
    constexpr double inv_2sqrt_2pi = 0.19947114020071633897;
    return inv_2sqrt_2pi / u * std::exp(-0.5 * u * u);
}

double gaussian_tail(double u) {
    return 0.5 * std::erfc(u / std::numbers::sqrt2);
}

double log_gamma_upper_tail(double shape, double x) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw InvalidInput("gamma_upper_tail requires shape > 0, got " + std::to_string(shape));
    }
    require_nonnegative(x, "gamma_upper_tail");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    if (x < shape + 1.0) {
        const double log_p = log_lower_series(shape, x);
        return std::log1p(-std::exp(log_p));
    }
    return log_upper_fraction(shape, x);
}

double gamma_upper_tail(double shape, double x) {
    return std::exp(log_gamma_upper_tail(shape, x));
}

} // namespace expotail
