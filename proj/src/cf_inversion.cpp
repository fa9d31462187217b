#include "expotail/oracle.hpp"

#include "expotail/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace expotail {

namespace {

using cplx = std::complex<double>;

// Cumulant generating function K(z) = log E exp(z S) of the weighted sum.
class SumCumulant {
public:
    SumCumulant(const Distribution& d, const WeightVector& w)
        : laplace_(d.law() == Law::Laplace), shape_(d.shape()), a_(w.values().begin(), w.values().end()),
          a_max_(w.max()), mean_(weight_stats(w, d).mean_s) {}

    bool laplace() const { return laplace_; }
    double a_max() const { return a_max_; }
    double mean() const { return mean_; }
    std::span<const double> weights() const { return a_; }

    cplx value(cplx z) const {
        cplx s = 0.0;
        for (double a : a_) {
            s -= std::log(1.0 - a * z);
            if (laplace_) s -= std::log(1.0 + a * z);
        }
        return laplace_ ? s : shape_ * s;
    }

    double value(double c) const { return value(cplx(c, 0.0)).real(); }

    double d1(double c) const {
        double s = 0.0;
        for (double a : a_) {
            s += a / (1.0 - a * c);
            if (laplace_) s -= a / (1.0 + a * c);
        }
        return laplace_ ? s : shape_ * s;
    }

    double d2(double c) const {
        double s = 0.0;
        for (double a : a_) {
            const double p = a / (1.0 - a * c);
            s += p * p;
            if (laplace_) {
                const double q = a / (1.0 + a * c);
                s += q * q;
            }
        }
        return laplace_ ? s : shape_ * s;
    }

private:
    bool laplace_;
    double shape_;
    std::vector<double> a_;
    double a_max_;
    double mean_;
};

// Root of K'(c) = t on (lo, hi), K' increasing. Newton inside a bracket, with a bisection
// whenever the bracket fails to halve, so a step landing next to a pole cannot stall.
double solve_saddle(const SumCumulant& k, double t, double lo, double hi) {
    double c = 0.5 * (lo + hi);
    double width = hi - lo;
    for (int it = 0; it < 400; ++it) {
        const double d1 = k.d1(c);
        const double g = d1 - t;
        if (std::fabs(g) <= 1e-14 * (std::fabs(t) + std::fabs(d1))) return c;
        if (g > 0.0) hi = c; else lo = c;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(c)) return 0.5 * (lo + hi);
        double next = c - g / k.d2(c);
        const bool stalled = hi - lo > 0.5 * width;
        width = hi - lo;
        if (stalled || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        c = next;
    }
    return c;
}

using GK = boost::math::quadrature::gauss_kronrod<double, 21>;

constexpr int kMaxEvaluations = 1'000'000;

// Bisection on the Kronrod error estimate against an absolute tolerance. Panels whose
// error is already at rounding level relative to their L1 norm are accepted.
template <class F>
double adaptive_gk(const F& f, double a, double b, double abs_tol, int depth, double& error, const int& evaluations) {
    double err = 0.0;
    double l1 = 0.0;
    const double est = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    // With max_depth 0 the error estimate comes back in reference-interval units.
    err *= 0.5 * (b - a);
    if (err <= abs_tol || err <= 1e-14 * l1 || depth == 0 || evaluations > kMaxEvaluations) {
        error += err;
        return est;
    }
    const double mid = 0.5 * (a + b);
    return adaptive_gk(f, a, mid, 0.5 * abs_tol, depth - 1, error, evaluations) +
           adaptive_gk(f, mid, b, 0.5 * abs_tol, depth - 1, error, evaluations);
}

} // namespace

CfInversionResult cf_tail_inversion_detail(const Distribution& d, const WeightVector& w, double t) {
    if (!std::isfinite(t)) {
        if (std::isnan(t)) throw InvalidInput("cf_tail_inversion: threshold is NaN");
        return {t > 0 ? 0.0 : 1.0, 0.0, 0};
    }
    const SumCumulant k(d, w);
    if (k.laplace()) {
        if (t == 0.0) return {0.5, 0.0, 0};
        if (t < 0.0) {
            auto r = cf_tail_inversion_detail(d, w, -t);
            r.value = 1.0 - r.value;
            return r;
        }
    } else if (t <= 0.0) {
        return {1.0, 0.0, 0};
    }

    // Integration line Re z = c at the saddlepoint, kept away from the pole of 1/z at 0.
    const double edge = 1.0 / k.a_max();
    const double c_min = 0.05 * edge;
    double c = 0.0;
    if (t >= k.mean()) {
        c = std::max(solve_saddle(k, t, 0.0, edge), c_min);
    } else {
        double lo = -edge;
        while (k.d1(lo) > t) lo *= 2.0;
        c = std::min(solve_saddle(k, t, lo, 0.0), -c_min);
    }

    if (!(c < edge) || !std::isfinite(k.d2(c))) {
        throw NumericFailure("cf_tail_inversion: saddlepoint search reached the edge of the MGF domain", 0.0, 1.0);
    }
    const double log_scale = k.value(c) - c * t;
    const auto integrand = [&](cplx z) {
        return std::exp(k.value(z) - log_scale - z * t) / z;
    };

    int evaluations = 0;
    double error = 0.0;
    constexpr int depth = 24;
    // The integrand is 1/c at y = 0 and spreads over the saddle width, which sets its L1 scale.
    const double width = 1.0 / std::sqrt(k.d2(c));
    const double tol = 1e-13 * width / std::fabs(c);

    // Vertical part, 0 <= y <= y0, split into half periods of exp(-i y t).
    const double y0 = 8.0 * width;
    const int pieces = std::max(1, static_cast<int>(std::ceil(y0 * t / std::numbers::pi)));
    double vertical = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const double a = y0 * i / pieces;
        const double b = y0 * (i + 1) / pieces;
        vertical += adaptive_gk(
            [&](double y) {
                ++evaluations;
                return integrand(cplx(c, y)).real();
            },
            a, b, tol / pieces, depth, error, evaluations);
    }

    // Horizontal ray z = c + s + i y0, s >= 0; its contribution is Im of the integrand.
    const auto ray = [&](double s) {
        ++evaluations;
        return integrand(cplx(c + s, y0)).imag();
    };
    std::vector<double> breaks{0.0};
    for (double a : k.weights()) {
        const double s = 1.0 / a - c;
        if (s > 0.0) breaks.push_back(s);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.push_back(breaks.back() + 10.0 * y0 + 10.0 / t);
    double horizontal = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] - breaks[i] <= 0.0) continue;
        horizontal += adaptive_gk(ray, breaks[i], breaks[i + 1], tol / breaks.size(), depth, error, evaluations);
    }
    {
        thread_local boost::math::quadrature::exp_sinh<double> tail_rule;
        double err = 0.0;
        double l1 = 0.0;
        std::size_t levels = 0;
        horizontal += tail_rule.integrate(ray, breaks.back(), std::numeric_limits<double>::infinity(), 1e-12, &err,
                                          &l1, &levels);
        error += err;
    }

    const double factor = std::exp(log_scale) / std::numbers::pi;
    double value = factor * (vertical + horizontal);
    error *= factor;
    if (c < 0.0) value += 1.0;
    if (!std::isfinite(value) || error > 1e-6) {
        throw NumericFailure("cf_tail_inversion: quadrature did not converge (error estimate " +
                                 std::to_string(error) + ")",
                             value, error);
    }
    return {std::clamp(value, 0.0, 1.0), error, evaluations};
}

double cf_tail_inversion(const Distribution& d, const WeightVector& w, double t) {
    return cf_tail_inversion_detail(d, w, t).value;
}

} // namespace expotail
