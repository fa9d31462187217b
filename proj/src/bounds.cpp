#include "expotail/bounds.hpp"

#include "expotail/errors.hpp"
#include "expotail/legendre.hpp"
#include "expotail/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace expotail {

namespace {

BoundValue make(double log_value, BoundKind kind, bool valid) {
    return {std::exp(log_value), log_value, kind, valid};
}

void require_finite(double t, const char* what) {
    if (!std::isfinite(t)) throw InvalidInput(std::string(what) + ": t must be finite");
}

void require_nonnegative_law(const Distribution& d, const char* what) {
    if (!d.nonnegative()) {
        throw UnsupportedLaw(std::string(what) + " requires a nonnegative summand law, got " +
                             std::string(law_name(d.law())));
    }
}

const double kCubeRoot16 = std::cbrt(16.0);

} // namespace

std::string_view bound_kind_name(BoundKind kind) {
    switch (kind) {
    case BoundKind::JansonUpper: return "janson_upper";
    case BoundKind::JansonLower: return "janson_lower";
    case BoundKind::LaplaceUpper: return "laplace_upper";
    case BoundKind::LaplaceLower: return "laplace_lower";
    case BoundKind::GenericUpper: return "generic_upper";
    case BoundKind::GenericLower: return "generic_lower";
    case BoundKind::GammaUpper: return "gamma_upper";
    case BoundKind::GammaLower: return "gamma_lower";
    case BoundKind::SInequalityUpper: return "s_ineq_upper";
    case BoundKind::MomentUpper: return "moment_upper";
    case BoundKind::MomentLower: return "moment_lower";
    case BoundKind::PaleyZygmundLower: return "pz_lower";
    }
    return "unknown";
}

BoundValue janson_upper(double t, const WeightStats& stats) {
    require_finite(t, "janson_upper");
    if (!(t > 0.0)) throw InvalidInput("janson_upper is undefined for t <= 0");
    const double lt = std::log(t);
    return make(-lt - stats.alpha_exp * (t - 1.0 - lt), BoundKind::JansonUpper, t > 1.0);
}

BoundValue janson_lower(double t, const WeightStats& stats) {
    require_finite(t, "janson_lower");
    const double a = stats.alpha_exp;
    return make(-std::log(2.0 * std::numbers::e * a) - a * (t - 1.0), BoundKind::JansonLower, t > 1.0);
}

BoundValue laplace_upper(double t, const WeightStats& stats) {
    require_finite(t, "laplace_upper");
    if (t < 0.0) throw InvalidInput("laplace_upper is undefined for t < 0");
    const double a = stats.alpha_sym;
    return make(-0.5 * a * a * h_closed(2.0 * t / a), BoundKind::LaplaceUpper, t > 1.0);
}

BoundValue laplace_lower(double t, const WeightStats& stats) {
    require_finite(t, "laplace_lower");
    if (!(t > 0.0)) throw InvalidInput("laplace_lower is undefined for t <= 0");
    const double at = stats.alpha_sym * t;
    return make(-std::log(57.0) - 0.5 * std::log(at) - at, BoundKind::LaplaceLower, t > 1.0);
}

BoundValue generic_upper(const Distribution& d, const WeightVector& w, double t) {
    require_nonnegative_law(d, "generic_upper");
    require_finite(t, "generic_upper");
    const WeightStats s = weight_stats(w, d);
    // For t <= 1 the supremum over theta > 0 is 0.
    const double rate = t > 1.0 ? rate_function(d, d.mean() * t).value : 0.0;
    return make(-s.alpha_exp * rate, BoundKind::GenericUpper, t > 1.0);
}

BoundValue generic_lower(const Distribution& d, const WeightVector& w, double t, double p_ge_mean) {
    require_nonnegative_law(d, "generic_lower");
    require_finite(t, "generic_lower");
    if (!(p_ge_mean > 0.0 && p_ge_mean <= 1.0)) {
        throw InvalidInput("p_ge_mean must lie in (0, 1], got " + std::to_string(p_ge_mean));
    }
    const WeightStats s = weight_stats(w, d);
    const double v = std::max(0.0, (t - 1.0) * s.alpha_exp * d.mean());
    return make(std::log(p_ge_mean) + log_r_function(d, v), BoundKind::GenericLower, t > 1.0);
}

BoundValue gamma_upper(const Distribution& d, const WeightVector& w, double t) {
    BoundValue b = generic_upper(d, w, t);
    b.kind = BoundKind::GammaUpper;
    return b;
}

BoundValue gamma_lower(const Distribution& d, const WeightVector& w, double t) {
    require_nonnegative_law(d, "gamma_lower");
    const double pz = pz_bound(3.0 * (1.0 + 2.0 / d.shape()));
    BoundValue b = generic_lower(d, w, t, pz);
    b.kind = BoundKind::GammaLower;
    return b;
}

double log_r_function(const Distribution& d, double v) {
    require_nonnegative_law(d, "r_function");
    if (!(v >= 0.0) || std::isnan(v)) throw InvalidInput("r_function requires v >= 0, got " + std::to_string(v));
    const double g = d.shape();
    if (d.law() == Law::Exponential || g >= 1.0) return -v;
    // shape < 1: (1 / (2 Gamma(g))) min{v^{g-1}, 1} e^{-v}
    const double log_min = v >= 1.0 ? (g - 1.0) * std::log(v) : 0.0;
    return -std::log(2.0) - std::lgamma(g) + log_min - v;
}

double r_function(const Distribution& d, double v) {
    return std::exp(log_r_function(d, v));
}

double r_infimum_numeric(const Distribution& d, double v) {
    require_nonnegative_law(d, "r_infimum_numeric");
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidInput("r_infimum_numeric requires finite v > 0, got " + std::to_string(v));
    }
    const double g = d.shape();
    const auto log_ratio = [&](double u) {
        return log_gamma_upper_tail(g, u + v) - log_gamma_upper_tail(g, u);
    };

    constexpr int grid = 240;
    const double log_lo = std::log(1e-8);
    const double log_hi = std::log(1e6);
    std::vector<double> us;
    us.reserve(grid + 1);
    us.push_back(0.0);
    for (int i = 0; i < grid; ++i) {
        us.push_back(std::exp(log_lo + (log_hi - log_lo) * i / (grid - 1)));
    }
    std::size_t best = 0;
    double best_val = log_ratio(us[0]);
    for (std::size_t i = 1; i < us.size(); ++i) {
        const double r = log_ratio(us[i]);
        if (r < best_val) {
            best_val = r;
            best = i;
        }
    }
    // Refine between the neighbours of the best grid point.
    if (best > 0 && best + 1 < us.size()) {
        constexpr double inv_phi = 0.6180339887498948482;
        double lo = us[best - 1];
        double hi = us[best + 1];
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double f1 = log_ratio(x1);
        double f2 = log_ratio(x2);
        for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
            if (f1 > f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = log_ratio(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = log_ratio(x1);
            }
        }
        best_val = std::min({best_val, f1, f2});
    }
    // The ratio tends to e^{-v} as u -> infinity for every shape; for shape > 1 that
    // limit is the infimum and lies beyond any finite grid.
    return std::exp(std::min(best_val, -v));
}

double pz_bound(double c) {
    if (!(c >= 1.0) || !std::isfinite(c)) {
        throw InvalidInput("pz_bound requires a moment ratio C >= 1, got " + std::to_string(c));
    }
    return 1.0 / (kCubeRoot16 * std::max(c, 3.0));
}

BoundValue s_inequality_upper(double t, double p_ge_mean) {
    require_finite(t, "s_inequality_upper");
    if (!(p_ge_mean > 0.0 && p_ge_mean < 1.0)) {
        throw InvalidInput("p_ge_mean must lie in (0, 1), got " + std::to_string(p_ge_mean));
    }
    const bool valid = t >= 1.0 && p_ge_mean > 1.0 / 24.0 && p_ge_mean < 23.0 / 24.0;
    return make(t * std::log(p_ge_mean), BoundKind::SInequalityUpper, valid);
}

double moment_lower_constant(MomentMode mode) {
    const double s2e = std::sqrt(2.0 * std::numbers::e);
    switch (mode) {
    case MomentMode::Paper: return s2e / (s2e + 1.0);
    case MomentMode::ProofDerived: return std::sqrt(2.0 / std::numbers::e) / (s2e + 1.0);
    }
    return 0.0;
}

MomentBounds moment_bounds(double p, const WeightVector& w, MomentMode mode) {
    if (!(p >= 2.0) || !std::isfinite(p)) {
        throw DomainError("moment bounds hold for p >= 2, got " + std::to_string(p));
    }
    const WeightStats s = weight_stats(w, Distribution::laplace());
    const double scale = p * s.a_max + std::sqrt(p) * s.l2;
    return {moment_lower_constant(mode) * scale, 4.0 * std::numbers::sqrt2 * scale};
}

} // namespace expotail
