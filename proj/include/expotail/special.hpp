#pragma once

namespace expotail {

/// Rate function of the normalized Laplace Chernoff bound,
/// h(u) = sqrt(1+u^2) - 1 - log((1 + sqrt(1+u^2)) / 2), u >= 0.
double h_closed(double u);

struct SupResult {
    double value;
    double argmax;
    int iterations;
};

/// sup over theta in (0,1) of theta*u + log(1 - theta^2), by golden-section search.
/// Throws NumericFailure if the bracket does not shrink below 1e-14 within 200 steps.
SupResult h_sup(double u);

/// Maximizer of theta*u + log(1 - theta^2), i.e. the root of u(1 - theta^2) = 2 theta.
double h_argmax(double u);

/// Mills-ratio lower bound (1/sqrt(2 pi)) * u/(u^2+1) * exp(-u^2/2) on P(G > u), u > 0.
double gaussian_tail_lower(double u);

/// Weaker form (1/(2 sqrt(2 pi))) * exp(-u^2/2) / u, valid for u >= 1.
double gaussian_tail_lower_simple(double u);

/// P(G > u) for a standard Gaussian G.
double gaussian_tail(double u);

/// Regularized upper incomplete gamma Q(shape, x).
double gamma_upper_tail(double shape, double x);

/// log Q(shape, x); finite wherever Q underflows.
double log_gamma_upper_tail(double shape, double x);

} // namespace expotail
