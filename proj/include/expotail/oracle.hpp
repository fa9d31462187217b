#pragma once

#include "expotail/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace expotail {

enum class MixtureSide { OneSided, TwoSided };

/// coef times the law of a sum of (power + 1) i.i.d. summands with the given scale:
/// Erlang for one-sided mixtures, a sum of Laplace variables for two-sided ones.
struct MixtureTerm {
    double coef;
    double scale;
    int power;

    friend bool operator==(const MixtureTerm&, const MixtureTerm&) = default;
};

/// Signed mixture representing the exact law of a weighted sum.
class ExpMixture {
public:
    ExpMixture(std::vector<MixtureTerm> terms, MixtureSide side);
    /// coef_lo holds the low-order halves of double-double coefficients (coef + coef_lo).
    ExpMixture(std::vector<MixtureTerm> terms, std::vector<double> coef_lo, MixtureSide side);

    std::span<const MixtureTerm> terms() const noexcept { return terms_; }
    MixtureSide side() const noexcept { return side_; }

    /// P(S > t), clamped to [0, 1].
    double tail(double t) const;
    /// log P(S > t) for t >= 0, evaluated relative to the slowest exponential so deep
    /// tails do not underflow. -inf if the mixture sum rounds to a nonpositive number.
    double log_tail(double t) const;

    double coefficient_sum() const;
    double abs_coefficient_sum() const;

    /// E|S|^p (two-sided) or E S^p (one-sided), p > 0.
    double abs_moment(double p) const;

    /// JSON list of {"coef", "scale", "power"} objects.
    std::string to_json() const;
    static ExpMixture from_json(std::string_view text, MixtureSide side);

private:
    // Per term: tail(x) = coef * exp(-x / scale) * sum_l poly[l] (x / scale)^l for x >= 0.
    // Evaluated in double-double so that cancelling coefficients keep full accuracy.
    double tail_sum(double t, double shift) const;

    std::vector<MixtureTerm> terms_;
    std::vector<double> coef_lo_;
    MixtureSide side_;
    // Double-double tail polynomial coefficients, split into high and low parts.
    std::vector<std::vector<double>> poly_hi_;
    std::vector<std::vector<double>> poly_lo_;
};

/// Weights equal within this relative tolerance are merged into one repeated pole.
inline constexpr double kClusterTolerance = 1e-9;
/// Sum of |coef| above which a mixture is declared ill-conditioned. Coefficients
/// are carried in double-double, so the absolute error is about 1e-32 times this.
inline constexpr double kConditioningLimit = 1e16;
/// Largest n handled by the partial-fraction oracle.
inline constexpr std::size_t kMaxMixtureTerms = 64;

struct PoleGroup {
    double value;
    int multiplicity;
};

/// Clusters weights into distinct poles with multiplicities (sorted ascending).
std::vector<PoleGroup> cluster_weights(std::span<const double> weights, double rel_tol = kClusterTolerance);

/// Partial fractions of prod_j (1 - b_j s)^{-m_j} = sum_j sum_k c_jk (1 - b_j s)^{-k}.
/// Returns one term per (j, k) with power k - 1.
std::vector<MixtureTerm> partial_fractions(std::span<const PoleGroup> poles);

/// Exact law of sum a_i X_i with X_i ~ Exp(1). nullopt when n > 64 or the
/// coefficients are ill-conditioned.
std::optional<ExpMixture> hypoexp_mixture(const WeightVector& w);

/// Exact law of sum a_i X_i with X_i standard Laplace (partial fractions in s^2).
std::optional<ExpMixture> laplace_mixture(const WeightVector& w);

enum class ExactSource { Mixture, CfInversion, ImportanceSampling };
std::string_view exact_source_name(ExactSource s);

struct TailValue {
    double p;
    ExactSource source;
};

/// P(sum a_i X_i > t) for exponential summands; falls back to CF inversion.
double hypoexp_tail(const WeightVector& w, double t);
/// P(sum a_i X_i > s) for Laplace summands, any real s; falls back to CF inversion.
double laplace_tail(const WeightVector& w, double s);

/// E|S|^p for a Laplace sum, p > 0.
double laplace_abs_moment(const WeightVector& w, double p);
/// Same moment from inverted tails; used when the mixture is ill-conditioned.
double laplace_abs_moment_quadrature(const WeightVector& w, double p);

struct CfInversionResult {
    double value;
    double error_estimate;
    int evaluations;
};

/// P(S > t) by inverting the moment generating function along a vertical line
/// Re z = c placed at the saddlepoint (c = 0 would be the Gil-Pelaez formula).
/// The far part of the line is swung onto a horizontal ray so that the integrand
/// decays like exp(-s t) instead of oscillating.
CfInversionResult cf_tail_inversion_detail(const Distribution& d, const WeightVector& w, double t);
double cf_tail_inversion(const Distribution& d, const WeightVector& w, double t);

/// Dispatches to the best available oracle for the law.
TailValue exact_tail(const Distribution& d, const WeightVector& w, double threshold);

/// P(S >= E S); 1/2 for Laplace sums.
double p_ge_mean(const Distribution& d, const WeightVector& w);

} // namespace expotail
