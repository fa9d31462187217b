// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "expotail/bounds.hpp"
#include "expotail/harness.hpp"
#include "expotail/montecarlo.hpp"
#include "expotail/oracle.hpp"
#include "expotail/special.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace expotail;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s [%2d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// Asymptotic two-sample Kolmogorov-Smirnov p-value with the usual small-sample correction.
double ks_p_value(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

Outcome sandwich(const Distribution& d, int instances, double limit_s) {
    SandwichConfig c;
    c.distribution = d;
    c.instances = instances;
    c.seed = kSeed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = sandwich_report(c);
    const double secs = seconds_since(t0);
    double worst = 1.0;
    std::size_t fallbacks = 0;
    for (const auto& r : rows) {
        worst = std::min({worst, r.slack_low, r.slack_high});
        if (r.source == ExactSource::ImportanceSampling) ++fallbacks;
    }
    const std::size_t fails = count_failures(rows);
    const bool ok = fails == 0 && worst >= -1e-12 && secs < limit_s && fallbacks == 0 &&
                    rows.size() == static_cast<std::size_t>(instances) * c.t_grid.size();
    return {ok, std::to_string(rows.size()) + " rows, " + std::to_string(fails) + " failures, " +
                    std::to_string(fallbacks) + " sampling fallbacks, min slack " + fmt("%.3g", worst) +
                    fmt(", %.3f s of %.0f s", secs, limit_s)};
}

} // namespace

int main() {
    const Distribution lap = Distribution::laplace();
    const Distribution expo = Distribution::exponential();
    const WeightVector two_one{2.0, 1.0};

    criterion(1, "Laplace sandwich", [&] { return sandwich(lap, 50, 10.0); });

    criterion(2, "exponential sandwich", [&] {
        Outcome o = sandwich(expo, 50, 10.0);
        const auto s = weight_stats(two_one, expo);
        const double lo = janson_lower(2.0, s).value;
        const double ex = hypoexp_tail(two_one, 6.0);
        const double up = janson_upper(2.0, s).value;
        // Reference values computed independently at 30 digits.
        const double ref_lo = 0.0273616662079662651, ref_ex = 0.0970953845590615275, ref_up = 0.315553698656390155;
        const bool fixed = std::abs(lo - ref_lo) <= 1e-6 && std::abs(ex - ref_ex) <= 1e-6 && std::abs(up - ref_up) <= 1e-6;
        o.pass = o.pass && fixed;
        o.detail += fmt("; (2,1) t=2: lower %.7f exact %.7f upper %.7f", lo, ex, up);
        o.detail += fmt(", |upper - 0.315552| = %.2g (stated value is rounded)", std::abs(up - 0.315552));
        return o;
    });

    criterion(3, "gamma sandwich", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;
        for (double g : {0.5, 1.0, 2.0}) {
            SandwichConfig c;
            c.distribution = Distribution::gamma(g);
            c.instances = 10;
            c.seed = kSeed;
            const auto rows = sandwich_report(c);
            std::size_t cf = 0;
            for (const auto& r : rows) cf += r.source == ExactSource::CfInversion;
            const std::size_t fails = count_failures(rows);
            ok = ok && fails == 0 && cf == rows.size() && rows.size() == 60;
            detail += fmt("shape %.1f: %.0f rows, %.0f failures; ", g, static_cast<double>(rows.size()),
                          static_cast<double>(fails));
        }
        const double secs = seconds_since(t0);
        ok = ok && secs < 60.0;
        return Outcome{ok, detail + fmt("%.3f s of 60 s", secs)};
    });

    criterion(4, "h identity and regimes", [&] {
        double worst = 0.0;
        int regime_fail = 0;
        for (int i = 0; i < 200; ++i) {
            const double u = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
            const double h = h_closed(u);
            worst = std::max(worst, std::abs(h_sup(u).value - h));
            const bool ok = u < std::numbers::sqrt2 ? h >= u * u / 5.0 : h >= u / 4.0;
            regime_fail += !ok;
        }
        return Outcome{worst <= 1e-10 && regime_fail == 0,
                       fmt("max |h_sup - h| = %.3g on 200 points, %.0f regime violations", worst, regime_fail)};
    });

    criterion(5, "oracle cross-agreement", [&] {
        auto instances = random_instances(14, kSeed + 5);
        // Near-confluent instances: clusters at relative gap 1e-6.
        for (int i = 0; i < 6; ++i) {
            CounterRng rng(kSeed, 500 + i);
            std::vector<double> w;
            const int clusters = 1 + i % 3;
            for (int c = 0; c < clusters; ++c) {
                const double a = std::exp(std::log(0.1) + std::log(100.0) * rng.uniform());
                w.push_back(a);
                w.push_back(a * (1.0 + 1e-6));
                if (i >= 3) w.push_back(a * (1.0 - 1e-6));
            }
            instances.emplace_back(w);
        }
        double worst = 0.0;
        int checked = 0, fails = 0;
        for (const auto& w : instances) {
            for (const auto& d : {expo, lap}) {
                const auto mix = d.law() == Law::Laplace ? laplace_mixture(w) : hypoexp_mixture(w);
                if (!mix) {
                    ++fails;
                    continue;
                }
                const auto s = weight_stats(w, d);
                const double unit = d.law() == Law::Laplace ? s.sigma : s.l1;
                for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
                    const double pm = mix->tail(t * unit);
                    const double pc = cf_tail_inversion(d, w, t * unit);
                    const double rel = std::abs(pm - pc) / pm;
                    worst = std::max(worst, rel);
                    fails += !(rel <= 1e-8);
                    ++checked;
                }
            }
        }
        return Outcome{fails == 0 && checked == 200,
                       fmt("%.0f comparisons (20 instances x 5 thresholds x 2 laws), max relative gap %.3g",
                           checked, worst)};
    });

    criterion(6, "Gaussian-mixture representation", [&] {
        bool ok = true;
        std::string detail = "KS p-values";
        for (std::uint64_t s : {1, 2, 3}) {
            const auto w = random_instances(1, kSeed + s)[0];
            const auto a = sample_sum(lap, w, 100000, kSeed + s, Representation::Direct);
            const auto b = sample_sum(lap, w, 100000, kSeed + 1000 + s, Representation::GaussianMixture);
            const double p = ks_p_value(a, b);
            ok = ok && p > 0.001;
            detail += fmt(" %.4f", p);
        }
        return Outcome{ok, detail};
    });

    criterion(7, "importance sampling", [&] {
        const double x = 5.0 * weight_stats(two_one, lap).sigma;
        const double exact = laplace_tail(two_one, x);
        const auto is = is_tail(lap, two_one, x, 100000, kSeed);
        const auto mc = mc_tail(lap, two_one, x, 1000000, kSeed);
        const bool ok = std::abs(is.p_hat - exact) <= 4.0 * is.std_error && is.std_error / is.p_hat <= 0.02 &&
                        mc.ci_low <= exact && exact <= mc.ci_high;
        return Outcome{ok, fmt("oracle %.6g, tilted %.6g (%.2f stderr off, rel stderr %.4f)", exact, is.p_hat,
                               std::abs(is.p_hat - exact) / is.std_error, is.std_error / is.p_hat) +
                               fmt("; plain CI [%.6g, %.6g]", mc.ci_low, mc.ci_high)};
    });

    criterion(8, "moment bounds", [&] {
        int fails = 0, checked = 0;
        for (const auto& w : random_instances(20, kSeed + 8)) {
            for (double p : {2.0, 3.0, 4.0, 6.0, 8.0}) {
                const double m = std::pow(laplace_abs_moment(w, p), 1.0 / p);
                const auto b = moment_bounds(p, w, MomentMode::ProofDerived);
                fails += !(b.lower <= m && m <= b.upper);
                ++checked;
            }
        }
        const WeightVector one{1.0};
        const double stated_lower = moment_bounds(2.0, one, MomentMode::Paper).lower;
        const double exact = std::sqrt(laplace_abs_moment(one, 2.0));
        const bool counterexample = stated_lower > exact;
        return Outcome{fails == 0 && checked == 100 && counterexample,
                       fmt("proof-derived constant: %.0f/%.0f bracketed; stated constant at p=2, n=1 gives lower "
                           "%.6f > exact %.6f (counterexample reproduced)",
                           checked - fails, checked, stated_lower, exact)};
    });

    criterion(9, "Paley-Zygmund", [&] {
        const double floor = pz_bound(9.0);
        double lo = 1.0, hi = 0.0;
        int fails = 0;
        for (const auto& w : random_instances(50, kSeed + 9)) {
            std::vector<double> sq;
            for (double a : w.values()) sq.push_back(a * a);
            const WeightVector w2(sq);
            const double p = hypoexp_tail(w2, weight_stats(w2, expo).l1);
            lo = std::min(lo, p);
            hi = std::max(hi, p);
            fails += !(p >= 0.044094 && p >= floor && p > 1.0 / 24.0 && p < 23.0 / 24.0);
        }
        return Outcome{fails == 0, fmt("50 instances, P(S >= E S) in [%.6f, %.6f], floor %.6f", lo, hi, floor)};
    });

    criterion(10, "S-inequality", [&] {
        int fails = 0, checked = 0;
        double worst = 1.0;
        for (const auto& w : random_instances(20, kSeed + 10)) {
            const double p = p_ge_mean(expo, w);
            const double mean = weight_stats(w, expo).l1;
            for (double t : {1.0, 1.5, 2.0, 3.0}) {
                const double b = s_inequality_upper(t, p).value;
                const double exact = hypoexp_tail(w, t * mean);
                bool ok = exact <= b + 1e-12;
                if (p <= 23.0 / 24.0) ok = ok && b <= std::pow(23.0 / 24.0, t);
                worst = std::min(worst, b - exact);
                fails += !ok;
                ++checked;
            }
        }
        return Outcome{fails == 0 && checked == 80,
                       fmt("%.0f checks, %.0f failures, min slack %.3g", checked, fails, worst)};
    });

    criterion(11, "asymptotic order", [&] {
        double lo = 10.0, hi = 0.0;
        for (const auto& w : random_instances(10, kSeed + 11)) {
            const auto s = weight_stats(w, lap);
            const auto mix = laplace_mixture(w);
            const double lt = mix ? mix->log_tail(50.0 * s.sigma) : std::log(laplace_tail(w, 50.0 * s.sigma));
            const double ratio = -lt / (s.alpha_sym * 50.0);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        const double single = -std::log(laplace_tail(WeightVector{1.0}, 50.0 * std::numbers::sqrt2)) /
                              (std::numbers::sqrt2 * 50.0);
        return Outcome{lo >= 0.9 && hi <= 1.1, fmt("ratios in [%.5f, %.5f] at t = 50; single weight %.7f", lo, hi,
                                                   single)};
    });

    std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
