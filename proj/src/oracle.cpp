#include "expotail/oracle.hpp"

#include "expotail/errors.hpp"
#include "expotail/format.hpp"

#include "dd.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace expotail {

namespace {

dd::DD factorial(int n) {
    dd::DD f{1.0};
    for (int i = 2; i <= n; ++i) f *= dd::DD(static_cast<double>(i));
    return f;
}

// Density of a sum of k standard Laplace variables at x >= 0 is exp(-x) sum_m w_m x^m with
// w_m = C(k-1, m) (2k-2-m)! / ((k-1)!^2 2^{2k-1-m}).
dd::DD laplace_sum_weight(int k, int m) {
    const dd::DD binom = factorial(k - 1) / (factorial(m) * factorial(k - 1 - m));
    const dd::DD f = factorial(k - 1);
    return dd::ldexp(binom * factorial(2 * k - 2 - m) / (f * f), -(2 * k - 1 - m));
}

std::vector<dd::DD> tail_polynomial(int power, MixtureSide side) {
    std::vector<dd::DD> p(static_cast<std::size_t>(power) + 1, dd::DD{0.0});
    if (side == MixtureSide::OneSided) {
        for (int l = 0; l <= power; ++l) p[l] = dd::DD(1.0) / factorial(l);
        return p;
    }
    // Tail of exp(-x) x^m is m! exp(-x) sum_{l<=m} x^l / l!.
    const int k = power + 1;
    for (int m = 0; m < k; ++m) {
        const dd::DD wm = laplace_sum_weight(k, m);
        for (int l = 0; l <= m; ++l) p[l] += wm * factorial(m) / factorial(l);
    }
    return p;
}

// E X^p / Gamma(p + 1) for X the sum of `power + 1` unit-scale summands (|X| when two-sided).
dd::DD reduced_moment(int power, double p, MixtureSide side) {
    using dd::DD;
    const int k = power + 1;
    // Rising products (p+1)...(p+j) / j! and (p+1)...(p+j).
    if (side == MixtureSide::OneSided) {
        DD m{1.0};
        for (int i = 1; i < k; ++i) m = m * (DD(p) + DD(static_cast<double>(i))) / DD(static_cast<double>(i));
        return m;
    }
    DD sum{0.0};
    DD rising{1.0};
    for (int j = 0; j < k; ++j) {
        if (j > 0) rising *= DD(p) + DD(static_cast<double>(j));
        sum += DD(2.0) * laplace_sum_weight(k, j) * rising;
    }
    return sum;
}

dd::DD horner(const std::vector<double>& hi, const std::vector<double>& lo, dd::DD x) {
    dd::DD acc{0.0};
    for (std::size_t l = hi.size(); l-- > 0;) acc = acc * x + dd::DD(hi[l], lo[l]);
    return acc;
}

struct Pole {
    dd::DD value; // pole location b_j of prod (1 - b_j s)^{-m_j}
    double scale; // scale of the resulting exponential terms
    int multiplicity;
};

// Coefficients c_jk in double-double. Around pole j put z = 1 - b_j s. Each other factor becomes
// (1 - b_l s)^{-m_l} = rho_l^{-m_l} (1 + kappa_l z)^{-m_l} with rho_l = (b_j - b_l)/b_j and
// kappa_l = b_l/(b_j - b_l). The Taylor coefficients g_r of the product follow from the
// log-derivative recurrence, and c_jk = g_{m_j - k}.
std::pair<std::vector<MixtureTerm>, std::vector<double>> pole_expansion(const std::vector<Pole>& poles) {
    using dd::DD;
    std::vector<MixtureTerm> terms;
    std::vector<double> lo;
    for (std::size_t j = 0; j < poles.size(); ++j) {
        const DD bj = poles[j].value;
        const int mj = poles[j].multiplicity;
        DD g0{1.0};
        std::vector<DD> kappa;
        std::vector<int> mult;
        for (std::size_t l = 0; l < poles.size(); ++l) {
            if (l == j) continue;
            const DD bl = poles[l].value;
            const DD diff = bj - bl;
            g0 = g0 / dd::pow_int(diff / bj, poles[l].multiplicity);
            kappa.push_back(bl / diff);
            mult.push_back(poles[l].multiplicity);
        }
        // L_q = sum_l m_l (-kappa_l)^q / q are the coefficients of log G.
        std::vector<DD> lq(static_cast<std::size_t>(mj), DD{0.0});
        for (int q = 1; q < mj; ++q) {
            DD s{0.0};
            for (std::size_t l = 0; l < kappa.size(); ++l) {
                s += DD(static_cast<double>(mult[l])) * dd::pow_int(-kappa[l], q);
            }
            lq[q] = s / DD(static_cast<double>(q));
        }
        std::vector<DD> g(static_cast<std::size_t>(mj), DD{0.0});
        g[0] = g0;
        for (int r = 1; r < mj; ++r) {
            DD s{0.0};
            for (int q = 1; q <= r; ++q) s += DD(static_cast<double>(q)) * lq[q] * g[r - q];
            g[r] = s / DD(static_cast<double>(r));
        }
        for (int k = mj; k >= 1; --k) {
            const DD c = g[mj - k];
            terms.push_back({c.hi, poles[j].scale, k - 1});
            lo.push_back(c.lo);
        }
    }
    return {std::move(terms), std::move(lo)};
}

std::optional<ExpMixture> checked_mixture(const std::vector<Pole>& poles, MixtureSide side) {
    auto [terms, lo] = pole_expansion(poles);
    double abs_sum = 0.0;
    for (const auto& t : terms) abs_sum += std::fabs(t.coef);
    if (!(abs_sum <= kConditioningLimit)) return std::nullopt;
    return ExpMixture(std::move(terms), std::move(lo), side);
}

} // namespace

ExpMixture::ExpMixture(std::vector<MixtureTerm> terms, MixtureSide side)
    : ExpMixture(std::move(terms), std::vector<double>{}, side) {}

ExpMixture::ExpMixture(std::vector<MixtureTerm> terms, std::vector<double> coef_lo, MixtureSide side)
    : terms_(std::move(terms)), coef_lo_(std::move(coef_lo)), side_(side) {
    if (terms_.empty()) throw InvalidInput("mixture needs at least one term");
    if (coef_lo_.empty()) coef_lo_.assign(terms_.size(), 0.0);
    if (coef_lo_.size() != terms_.size()) throw InvalidInput("coef_lo needs one entry per term");
    for (const auto& term : terms_) {
        if (!(term.scale > 0.0) || term.power < 0 || !std::isfinite(term.coef)) {
            throw InvalidInput("mixture term needs scale > 0, power >= 0 and a finite coefficient");
        }
        const auto poly = tail_polynomial(term.power, side_);
        auto& hi = poly_hi_.emplace_back();
        auto& lo = poly_lo_.emplace_back();
        for (const auto& c : poly) {
            hi.push_back(c.hi);
            lo.push_back(c.lo);
        }
    }
}

double ExpMixture::tail_sum(double t, double shift) const {
    dd::DD sum{0.0};
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const dd::DD x = dd::DD(t) / dd::DD(terms_[i].scale);
        const dd::DD coef(terms_[i].coef, coef_lo_[i]);
        sum += coef * dd::exp(dd::DD(shift) - x) * horner(poly_hi_[i], poly_lo_[i], x);
    }
    return sum.value();
}

double ExpMixture::tail(double t) const {
    if (std::isnan(t)) throw InvalidInput("mixture tail at NaN");
    if (t < 0.0) {
        if (side_ == MixtureSide::OneSided) return 1.0;
        return std::clamp(1.0 - tail_sum(-t, 0.0), 0.0, 1.0);
    }
    return std::clamp(tail_sum(t, 0.0), 0.0, 1.0);
}

double ExpMixture::log_tail(double t) const {
    if (!(t >= 0.0)) throw InvalidInput("log_tail requires t >= 0");
    double b_max = 0.0;
    for (const auto& term : terms_) b_max = std::max(b_max, term.scale);
    const double shift = t / b_max;
    const double sum = tail_sum(t, shift);
    if (!(sum > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::log(sum) - shift;
}

double ExpMixture::coefficient_sum() const {
    dd::DD s{0.0};
    for (std::size_t i = 0; i < terms_.size(); ++i) s += dd::DD(terms_[i].coef, coef_lo_[i]);
    return s.value();
}

double ExpMixture::abs_coefficient_sum() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::fabs(t.coef);
    return s;
}

double ExpMixture::abs_moment(double p) const {
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("moment order must be finite and > 0");
    dd::DD sum{0.0};
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const auto& term = terms_[i];
        sum += dd::DD(term.coef, coef_lo_[i]) * dd::pow(dd::DD(term.scale), p) * reduced_moment(term.power, p, side_);
    }
    // Gamma(p + 1) is common to every term.
    sum *= dd::DD(std::tgamma(p + 1.0));
    return sum.value();
}

std::string ExpMixture::to_json() const {
    std::string out = "[";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) out += ", ";
        out += "{\"coef\": " + fmt::json_number(terms_[i].coef) + ", \"scale\": " + fmt::json_number(terms_[i].scale) +
               ", \"power\": " + std::to_string(terms_[i].power) + "}";
    }
    out += "]";
    return out;
}

ExpMixture ExpMixture::from_json(std::string_view text, MixtureSide side) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("mixture JSON: ") + e.what());
    }
    if (!doc.is_array()) throw InvalidInput("mixture JSON must be a list of terms");
    std::vector<MixtureTerm> terms;
    for (const auto& item : doc) {
        try {
            terms.push_back({item.at("coef").get<double>(), item.at("scale").get<double>(), item.at("power").get<int>()});
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInput(std::string("mixture JSON term: ") + e.what());
        }
    }
    return ExpMixture(std::move(terms), side);
}

std::vector<PoleGroup> cluster_weights(std::span<const double> weights, double rel_tol) {
    std::vector<double> sorted(weights.begin(), weights.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<PoleGroup> groups;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        double sum = sorted[i];
        while (j < sorted.size() && sorted[j] - sorted[i] <= rel_tol * sorted[i]) sum += sorted[j++];
        groups.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
        i = j;
    }
    return groups;
}

std::vector<MixtureTerm> partial_fractions(std::span<const PoleGroup> poles) {
    std::vector<Pole> p;
    for (const auto& g : poles) p.push_back({dd::DD(g.value), g.value, g.multiplicity});
    return pole_expansion(p).first;
}

std::optional<ExpMixture> hypoexp_mixture(const WeightVector& w) {
    if (w.size() > kMaxMixtureTerms) return std::nullopt;
    std::vector<Pole> poles;
    for (const auto& g : cluster_weights(w.values())) poles.push_back({dd::DD(g.value), g.value, g.multiplicity});
    return checked_mixture(poles, MixtureSide::OneSided);
}

std::optional<ExpMixture> laplace_mixture(const WeightVector& w) {
    if (w.size() > kMaxMixtureTerms) return std::nullopt;
    // Partial fractions in s^2: poles at the exact squares of the weights, scales a.
    std::vector<Pole> poles;
    for (const auto& g : cluster_weights(w.values())) {
        poles.push_back({dd::two_prod(g.value, g.value), g.value, g.multiplicity});
    }
    return checked_mixture(poles, MixtureSide::TwoSided);
}

std::string_view exact_source_name(ExactSource s) {
    switch (s) {
    case ExactSource::Mixture: return "mixture";
    case ExactSource::CfInversion: return "cf_inversion";
    case ExactSource::ImportanceSampling: return "importance_sampling";
    }
    return "unknown";
}

double hypoexp_tail(const WeightVector& w, double t) {
    return exact_tail(Distribution::exponential(), w, t).p;
}

double laplace_tail(const WeightVector& w, double s) {
    return exact_tail(Distribution::laplace(), w, s).p;
}

TailValue exact_tail(const Distribution& d, const WeightVector& w, double threshold) {
    if (std::isnan(threshold)) throw InvalidInput("threshold is NaN");
    std::optional<ExpMixture> mix;
    if (d.law() == Law::Exponential) mix = hypoexp_mixture(w);
    if (d.law() == Law::Laplace) mix = laplace_mixture(w);
    if (mix) return {mix->tail(threshold), ExactSource::Mixture};
    return {cf_tail_inversion(d, w, threshold), ExactSource::CfInversion};
}

double laplace_abs_moment(const WeightVector& w, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("moment order must be finite and > 0");
    if (const auto mix = laplace_mixture(w)) {
        const double m = mix->abs_moment(p);
        if (m > 0.0) return m;
    }
    return laplace_abs_moment_quadrature(w, p);
}

double laplace_abs_moment_quadrature(const WeightVector& w, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("moment order must be finite and > 0");
    // E|S|^p = 2 p int_0^inf t^{p-1} P(S > t) dt. exp-sinh copes with the t^{p-1}
    // endpoint singularity; the variable is scaled by sigma so the tail decays at unit rate.
    const Distribution lap = Distribution::laplace();
    const double sigma = weight_stats(w, lap).sigma;
    // Chernoff bound at c = 1/(2 a_max) skips inversions whose contribution underflows.
    const double c = 0.5 / w.max();
    double log_mgf = 0.0;
    for (double a : w.values()) log_mgf -= std::log1p(-(a * c) * (a * c));
    boost::math::quadrature::exp_sinh<double> rule;
    const auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double x = u * sigma;
        if (log_mgf - c * x + (p - 1.0) * std::log(x) < -700.0) return 0.0;
        return 2.0 * p * std::pow(x, p - 1.0) * cf_tail_inversion(lap, w, x) * sigma;
    };
    return rule.integrate(f, 1e-10);
}

double p_ge_mean(const Distribution& d, const WeightVector& w) {
    if (d.law() == Law::Laplace) return 0.5;
    return exact_tail(d, w, weight_stats(w, d).mean_s).p;
}

} // namespace expotail
