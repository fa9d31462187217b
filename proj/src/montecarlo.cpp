#include "expotail/montecarlo.hpp"

#include "expotail/errors.hpp"
#include "expotail/legendre.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace expotail {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct ChunkStats {
    std::uint64_t hits = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
};

ChunkStats combine(const ChunkStats& a, const ChunkStats& b) {
    return {a.hits + b.hits, a.sum + b.sum, a.sum_sq + b.sum_sq};
}

// Fixed-shape pairwise reduction, independent of which thread produced which chunk.
ChunkStats pairwise_reduce(const std::vector<ChunkStats>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return combine(pairwise_reduce(v, lo, mid), pairwise_reduce(v, mid, hi));
}

unsigned resolve_threads(unsigned threads, std::uint64_t chunks) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
}

template <class Fn>
void for_each_chunk(std::uint64_t chunks, unsigned threads, const Fn& fn) {
    threads = resolve_threads(threads, chunks);
    if (threads <= 1) {
        for (std::uint64_t k = 0; k < chunks; ++k) fn(k);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned tid = 0; tid < threads; ++tid) {
        pool.emplace_back([&, tid] {
            for (std::uint64_t k = tid; k < chunks; k += threads) fn(k);
        });
    }
}

std::uint64_t chunk_count(std::uint64_t n) {
    return (n + kChunkSize - 1) / kChunkSize;
}

double draw_summand(CounterRng& rng, const Distribution& d, double a) {
    switch (d.law()) {
    case Law::Exponential: return a * rng.exponential();
    case Law::Gamma: return a * rng.gamma(d.shape());
    case Law::Laplace: {
        const double u = rng.uniform();
        return u < 0.5 ? a * std::log(2.0 * u) : -a * std::log(2.0 * (1.0 - u));
    }
    }
    return 0.0;
}

double draw_sum(CounterRng& rng, const Distribution& d, std::span<const double> w, Representation rep) {
    if (rep == Representation::GaussianMixture) {
        double v = 0.0;
        for (double a : w) v += a * a * rng.exponential();
        return std::sqrt(2.0 * v) * rng.normal();
    }
    double s = 0.0;
    for (double a : w) s += draw_summand(rng, d, a);
    return s;
}

// One summand under the law tilted by exp(theta x).
double draw_tilted_summand(CounterRng& rng, const Distribution& d, double a, double theta) {
    const double ta = theta * a;
    switch (d.law()) {
    case Law::Exponential: return a / (1.0 - ta) * rng.exponential();
    case Law::Gamma: return a / (1.0 - ta) * rng.gamma(d.shape());
    case Law::Laplace: {
        // Two-piece exponential; branch masses proportional to 1/(1 - ta) and 1/(1 + ta).
        const bool positive = rng.uniform() < 0.5 * (1.0 + ta);
        const double e = rng.exponential();
        return positive ? a / (1.0 - ta) * e : -a / (1.0 + ta) * e;
    }
    }
    return 0.0;
}

void check_tilt_domain(const Distribution& d, const WeightVector& w, double theta) {
    if (!std::isfinite(theta)) throw InvalidInput("tilt must be finite");
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double ta = theta * w[i];
        const bool inside = d.law() == Law::Laplace ? std::fabs(ta) < 1.0 : ta < 1.0;
        if (!inside) {
            throw DomainError("tilt " + std::to_string(theta) + " leaves the MGF domain at weight " +
                               std::to_string(i) + " (a = " + std::to_string(w[i]) + ")");
        }
    }
}

double sum_log_mgf(const Distribution& d, const WeightVector& w, double theta) {
    double k = 0.0;
    for (double a : w.values()) k += log_mgf(d, theta * a);
    return k;
}

MCEstimate normal_interval(MCEstimate e) {
    constexpr double z = 1.959963984540054;
    e.ci_low = std::max(0.0, e.p_hat - z * e.std_error);
    e.ci_high = e.p_hat + z * e.std_error;
    if (e.method == McMethod::Plain) e.ci_high = std::min(1.0, e.ci_high);
    return e;
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed) ^ (stream * kGolden + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next_u64() noexcept {
    return mix64(key_ + (++counter_) * kGolden);
}

double CounterRng::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::exponential() noexcept {
    return -std::log(uniform());
}

double CounterRng::normal() noexcept {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
}

double CounterRng::gamma(double shape) noexcept {
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::string_view method_name(McMethod m) {
    return m == McMethod::Plain ? "plain" : "tilted";
}

std::vector<double> sample_sum(const Distribution& d, const WeightVector& w, std::uint64_t n, std::uint64_t seed,
                               Representation rep, unsigned threads) {
    if (n == 0) throw InvalidInput("sample count must be >= 1");
    if (rep == Representation::GaussianMixture && d.law() != Law::Laplace) {
        throw UnsupportedLaw("the Gaussian-mixture representation applies to Laplace sums only");
    }
    std::vector<double> out(n);
    for_each_chunk(chunk_count(n), threads, [&](std::uint64_t k) {
        CounterRng rng(seed, k);
        const std::uint64_t end = std::min(n, (k + 1) * kChunkSize);
        for (std::uint64_t i = k * kChunkSize; i < end; ++i) out[i] = draw_sum(rng, d, w.values(), rep);
    });
    return out;
}

MCEstimate mc_tail(const Distribution& d, const WeightVector& w, double threshold, std::uint64_t n,
                   std::uint64_t seed, unsigned threads) {
    if (n < 100) throw InvalidInput("mc_tail needs at least 100 samples");
    if (std::isnan(threshold)) throw InvalidInput("threshold is NaN");
    const std::uint64_t chunks = chunk_count(n);
    std::vector<ChunkStats> stats(chunks);
    for_each_chunk(chunks, threads, [&](std::uint64_t k) {
        CounterRng rng(seed, k);
        const std::uint64_t end = std::min(n, (k + 1) * kChunkSize);
        ChunkStats s;
        for (std::uint64_t i = k * kChunkSize; i < end; ++i) {
            if (draw_sum(rng, d, w.values(), Representation::Direct) > threshold) ++s.hits;
        }
        stats[k] = s;
    });
    const ChunkStats total = pairwise_reduce(stats, 0, stats.size());
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(total.hits) / nn;
    MCEstimate e{p, std::sqrt(p * (1.0 - p) / nn), 0.0, 0.0, n, total.hits, McMethod::Plain, seed, 0.0};
    if (total.hits >= 30) return normal_interval(e);
    // Clopper-Pearson.
    const double k = static_cast<double>(total.hits);
    e.ci_low = total.hits == 0 ? 0.0 : boost::math::ibeta_inv(k, nn - k + 1.0, 0.025);
    e.ci_high = total.hits == n ? 1.0 : boost::math::ibeta_inv(k + 1.0, nn - k, 0.975);
    return e;
}

double chernoff_tilt(const Distribution& d, const WeightVector& w, double threshold) {
    const auto slope = [&](double theta) {
        double s = 0.0;
        for (double a : w.values()) s += a * log_mgf_derivative(d, theta * a);
        return s;
    };
    const double cap = 0.999 / w.max();
    if (slope(cap) <= threshold) return cap;
    double lo = 0.0;
    double hi = cap;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * cap; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) < threshold) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

MCEstimate is_tail(const Distribution& d, const WeightVector& w, double threshold, std::uint64_t n,
                   std::uint64_t seed, unsigned threads) {
    const double mean = weight_stats(w, d).mean_s;
    if (!(threshold > mean)) {
        throw InvalidInput("importance sampling needs a threshold above E S = " + std::to_string(mean));
    }
    return is_tail_with_tilt(d, w, threshold, chernoff_tilt(d, w, threshold), n, seed, threads);
}

MCEstimate is_tail_with_tilt(const Distribution& d, const WeightVector& w, double threshold, double theta,
                             std::uint64_t n, std::uint64_t seed, unsigned threads) {
    if (n < 2) throw InvalidInput("importance sampling needs at least 2 samples");
    if (std::isnan(threshold)) throw InvalidInput("threshold is NaN");
    check_tilt_domain(d, w, theta);
    const double log_mgf_sum = sum_log_mgf(d, w, theta);
    const std::uint64_t chunks = chunk_count(n);
    std::vector<ChunkStats> stats(chunks);
    for_each_chunk(chunks, threads, [&](std::uint64_t k) {
        CounterRng rng(seed, k);
        const std::uint64_t end = std::min(n, (k + 1) * kChunkSize);
        ChunkStats s;
        for (std::uint64_t i = k * kChunkSize; i < end; ++i) {
            double sum = 0.0;
            for (double a : w.values()) sum += draw_tilted_summand(rng, d, a, theta);
            if (sum > threshold) {
                const double lr = std::exp(log_mgf_sum - theta * sum);
                ++s.hits;
                s.sum += lr;
                s.sum_sq += lr * lr;
            }
        }
        stats[k] = s;
    });
    const ChunkStats total = pairwise_reduce(stats, 0, stats.size());
    const double nn = static_cast<double>(n);
    const double mean = total.sum / nn;
    const double var = std::max(0.0, (total.sum_sq - nn * mean * mean) / (nn - 1.0));
    MCEstimate e{mean, std::sqrt(var / nn), 0.0, 0.0, n, total.hits, McMethod::Tilted, seed, theta};
    return normal_interval(e);
}

} // namespace expotail
