#include "expotail/harness.hpp"

#include "expotail/bounds.hpp"
#include "expotail/errors.hpp"
#include "expotail/format.hpp"
#include "expotail/montecarlo.hpp"
#include "expotail/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace expotail {

namespace {

constexpr double kOracleTolerance = 1e-12;

std::string describe(const WeightVector& w) {
    std::string s = "[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += fmt::number(w[i]);
    }
    return s + "]";
}

std::string distribution_label(const Distribution& d) {
    if (d.law() == Law::Gamma) return "gamma(" + fmt::number(d.shape()) + ")";
    return std::string(law_name(d.law()));
}

struct Bracket {
    double lower;
    double upper;
};

Bracket bounds_for(const Distribution& d, const WeightVector& w, double t) {
    const WeightStats s = weight_stats(w, d);
    switch (d.law()) {
    case Law::Laplace: return {laplace_lower(t, s).value, laplace_upper(t, s).value};
    case Law::Exponential: return {janson_lower(t, s).value, janson_upper(t, s).value};
    case Law::Gamma: return {gamma_lower(d, w, t).value, gamma_upper(d, w, t).value};
    }
    return {0.0, 1.0};
}

SandwichRow make_row(const SandwichConfig& cfg, int id, const WeightVector& w, double t) {
    const Distribution& d = cfg.distribution;
    const WeightStats s = weight_stats(w, d);
    const double threshold = d.law() == Law::Laplace ? t * s.sigma : t * s.mean_s;
    const Bracket b = bounds_for(d, w, t);

    double exact = 0.0;
    double tol = kOracleTolerance;
    ExactSource source = ExactSource::Mixture;
    try {
        const TailValue tv = exact_tail(d, w, threshold);
        exact = tv.p;
        source = tv.source;
    } catch (const NumericFailure&) {
        const MCEstimate e = is_tail(d, w, threshold, cfg.fallback_samples, cfg.seed ^ static_cast<std::uint64_t>(id), 1);
        exact = e.p_hat;
        tol = e.ci_high - e.ci_low;
        source = ExactSource::ImportanceSampling;
    }
    SandwichRow row{id,
                    d,
                    std::vector<double>(w.values().begin(), w.values().end()),
                    t,
                    threshold,
                    b.lower,
                    exact,
                    b.upper,
                    exact - b.lower,
                    b.upper - exact,
                    tol,
                    false,
                    source};
    row.pass = b.lower <= exact + tol && exact <= b.upper + tol;
    return row;
}

template <class Fn>
void parallel_indices(int count, unsigned threads, const Fn& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned tid = 0; tid < threads; ++tid) {
        pool.emplace_back([&, tid] {
            for (int i = static_cast<int>(tid); i < count; i += static_cast<int>(threads)) fn(i);
        });
    }
}

PropertyCheck check(std::string name) {
    return {std::move(name), true, 0, 0, {}};
}

void record(PropertyCheck& c, bool ok, const std::string& witness) {
    ++c.checked;
    if (!ok) {
        ++c.failed;
        c.pass = false;
        if (c.witness.empty()) c.witness = witness;
    }
}

} // namespace

std::vector<WeightVector> random_instances(int count, std::uint64_t seed, int n_min, int n_max, double lo, double hi) {
    if (count < 0 || n_min < 1 || n_max < n_min || !(lo > 0.0) || !(hi >= lo)) {
        throw InvalidInput("random_instances: need count >= 0, 1 <= n_min <= n_max and 0 < lo <= hi");
    }
    std::vector<WeightVector> out;
    out.reserve(static_cast<std::size_t>(count));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < count; ++i) {
        CounterRng rng(seed, 0x1000000ULL + static_cast<std::uint64_t>(i));
        const int span = n_max - n_min + 1;
        const int n = n_min + static_cast<int>(rng.uniform() * span);
        std::vector<double> w(static_cast<std::size_t>(std::min(n, n_max)));
        for (double& a : w) a = std::exp(llo + (lhi - llo) * rng.uniform());
        out.emplace_back(std::move(w));
    }
    return out;
}

std::vector<SandwichRow> sandwich_report(const SandwichConfig& cfg) {
    for (double t : cfg.t_grid) {
        if (!(t > 1.0) || !std::isfinite(t)) {
            throw InvalidInput("sandwich t grid must lie in (1, inf), got " + fmt::number(t));
        }
    }
    std::vector<WeightVector> instances;
    if (cfg.weights) {
        instances.push_back(*cfg.weights);
    } else {
        instances = random_instances(cfg.instances, cfg.seed, cfg.n_min, cfg.n_max, cfg.weight_lo, cfg.weight_hi);
    }
    if (cfg.t_grid.empty()) return {};
    const int count = static_cast<int>(instances.size());
    std::vector<std::vector<SandwichRow>> per_instance(instances.size());
    parallel_indices(count, cfg.threads, [&](int i) {
        for (double t : cfg.t_grid) per_instance[i].push_back(make_row(cfg, i, instances[i], t));
    });
    std::vector<SandwichRow> rows;
    for (auto& v : per_instance) rows.insert(rows.end(), v.begin(), v.end());
    return rows;
}

std::size_t count_failures(const std::vector<SandwichRow>& rows) {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.pass; }));
}

std::string rows_to_json(const std::vector<SandwichRow>& rows) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << (i ? ",\n " : "\n ");
        os << "{\"instance\": " << r.instance << ", \"dist\": " << fmt::json_string(distribution_label(r.distribution))
           << ", \"n\": " << r.weights.size() << ", \"weights\": [";
        for (std::size_t j = 0; j < r.weights.size(); ++j) os << (j ? ", " : "") << fmt::json_number(r.weights[j]);
        os << "], \"t\": " << fmt::json_number(r.t) << ", \"threshold\": " << fmt::json_number(r.threshold)
           << ", \"lower\": " << fmt::json_number(r.lower) << ", \"exact\": " << fmt::json_number(r.exact)
           << ", \"upper\": " << fmt::json_number(r.upper) << ", \"slack_low\": " << fmt::json_number(r.slack_low)
           << ", \"slack_high\": " << fmt::json_number(r.slack_high)
           << ", \"tolerance\": " << fmt::json_number(r.tolerance) << ", \"pass\": " << (r.pass ? "true" : "false")
           << ", \"source\": " << fmt::json_string(exact_source_name(r.source)) << "}";
    }
    os << (rows.empty() ? "]" : "\n]");
    return os.str();
}

std::string rows_to_csv(const std::vector<SandwichRow>& rows) {
    std::ostringstream os;
    os << "instance,dist,n,t,lower,exact,upper,pass,source\n";
    for (const auto& r : rows) {
        os << r.instance << ',' << distribution_label(r.distribution) << ',' << r.weights.size() << ','
           << fmt::number(r.t) << ',' << fmt::number(r.lower) << ',' << fmt::number(r.exact) << ','
           << fmt::number(r.upper) << ',' << (r.pass ? "true" : "false") << ',' << exact_source_name(r.source)
           << '\n';
    }
    return os.str();
}

bool PropertyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const PropertyCheck* PropertyReport::find(std::string_view name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::string PropertyReport::to_json() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        os << (i ? ",\n " : "\n ") << "{\"name\": " << fmt::json_string(c.name)
           << ", \"pass\": " << (c.pass ? "true" : "false") << ", \"checked\": " << c.checked
           << ", \"failed\": " << c.failed << ", \"witness\": " << fmt::json_string(c.witness) << "}";
    }
    os << (checks.empty() ? "]" : "\n]");
    return os.str();
}

PropertyReport property_suite(std::uint64_t seed) {
    PropertyReport report;
    const Distribution expo = Distribution::exponential();
    const Distribution lap = Distribution::laplace();

    // Mean exceedance of sum a_i^2 Y_i against the Paley-Zygmund constant with C = 9.
    {
        PropertyCheck c = check("pz_mean_exceedance");
        const double floor = pz_bound(9.0);
        for (const auto& w : random_instances(50, seed)) {
            std::vector<double> sq;
            for (double a : w.values()) sq.push_back(a * a);
            const WeightVector w2(sq);
            const double p = hypoexp_tail(w2, weight_stats(w2, expo).l1);
            record(c, p >= floor && p > 1.0 / 24.0 && p < 23.0 / 24.0,
                   describe(w) + " P=" + fmt::number(p));
        }
        report.checks.push_back(c);
    }

    {
        PropertyCheck c = check("gaussian_tail_lower");
        for (int i = 1; i <= 400; ++i) {
            const double u = 0.025 * i;
            const double exact = gaussian_tail(u);
            bool ok = gaussian_tail_lower(u) <= exact;
            if (u >= 1.0) ok = ok && gaussian_tail_lower_simple(u) <= exact;
            record(c, ok, "u=" + fmt::number(u));
        }
        report.checks.push_back(c);
    }

    {
        PropertyCheck c = check("h_regimes");
        for (int i = 0; i < 400; ++i) {
            const double u = std::pow(10.0, -3.0 + 6.0 * i / 399.0);
            const double h = h_closed(u);
            bool ok = u < std::numbers::sqrt2 ? h >= u * u / 5.0 : h >= u / 4.0;
            ok = ok && std::abs(h_sup(u).value - h) <= 1e-10;
            record(c, ok, "u=" + fmt::number(u) + " h=" + fmt::number(h));
        }
        report.checks.push_back(c);
    }

    // P(S >= u + v) >= exp(-v / a_max) P(S >= u).
    {
        PropertyCheck c = check("decay_propagation");
        for (const auto& w : random_instances(20, seed + 1)) {
            const auto mix = hypoexp_mixture(w);
            if (!mix) continue;
            const double mean = weight_stats(w, expo).l1;
            for (double u : {0.0, 0.25 * mean, mean, 2.0 * mean, 5.0 * mean}) {
                for (double v : {0.1 * w.max(), w.max(), 5.0 * w.max()}) {
                    const double lhs = mix->tail(u + v);
                    const double rhs = std::exp(-v / w.max()) * mix->tail(u);
                    record(c, lhs >= rhs - kOracleTolerance,
                           describe(w) + " u=" + fmt::number(u) + " v=" + fmt::number(v));
                }
            }
        }
        report.checks.push_back(c);
    }

    {
        PropertyCheck c = check("p_ge_mean_interval");
        const double floor = pz_bound(9.0);
        for (const auto& w : random_instances(50, seed + 2)) {
            const double p = p_ge_mean(expo, w);
            record(c, p >= floor && p > 1.0 / 24.0 && p < 23.0 / 24.0, describe(w) + " P=" + fmt::number(p));
        }
        report.checks.push_back(c);
    }

    // -log P(S > t sigma) / (alpha t) close to 1 at t = 50.
    {
        PropertyCheck c = check("asymptotic_order");
        for (const auto& w : random_instances(10, seed + 3)) {
            const WeightStats s = weight_stats(w, lap);
            const auto mix = laplace_mixture(w);
            const double t = 50.0;
            const double log_tail = mix ? mix->log_tail(t * s.sigma) : std::log(laplace_tail(w, t * s.sigma));
            const double ratio = -log_tail / (s.alpha_sym * t);
            record(c, ratio >= 0.9 && ratio <= 1.1, describe(w) + " ratio=" + fmt::number(ratio));
        }
        report.checks.push_back(c);
    }

    {
        PropertyCheck c = check("s_inequality");
        for (const auto& w : random_instances(20, seed + 4)) {
            const double p = p_ge_mean(expo, w);
            const double mean = weight_stats(w, expo).l1;
            for (double t : {1.0, 1.5, 2.0, 3.0}) {
                const BoundValue b = s_inequality_upper(t, p);
                const double exact = hypoexp_tail(w, t * mean);
                bool ok = exact <= b.value + kOracleTolerance;
                if (p <= 23.0 / 24.0) ok = ok && b.value <= std::pow(23.0 / 24.0, t);
                record(c, ok, describe(w) + " t=" + fmt::number(t));
            }
        }
        report.checks.push_back(c);
    }

    {
        PropertyCheck c = check("moment_bracket");
        for (const auto& w : random_instances(20, seed + 5)) {
            for (double p : {2.0, 3.0, 4.0, 6.0, 8.0}) {
                const double m = std::pow(laplace_abs_moment(w, p), 1.0 / p);
                const MomentBounds b = moment_bounds(p, w, MomentMode::ProofDerived);
                record(c, b.lower <= m && m <= b.upper, describe(w) + " p=" + fmt::number(p));
            }
        }
        report.checks.push_back(c);
    }
    return report;
}

} // namespace expotail
