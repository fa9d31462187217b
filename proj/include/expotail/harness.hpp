#pragma once

#include "expotail/core.hpp"
#include "expotail/oracle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace expotail {

struct SandwichConfig {
    Distribution distribution = Distribution::laplace();
    int instances = 50;
    int n_min = 1;
    int n_max = 8;
    double weight_lo = 0.1;
    double weight_hi = 10.0;
    std::vector<double> t_grid{1.1, 1.5, 2.0, 3.0, 5.0, 10.0};
    std::uint64_t seed = 0;
    /// When set, the campaign runs on this single instance instead of random ones.
    std::optional<WeightVector> weights;
    /// Sample count for the importance-sampling fallback.
    std::uint64_t fallback_samples = 200000;
    unsigned threads = 0;
};

struct SandwichRow {
    int instance;
    Distribution distribution;
    std::vector<double> weights;
    double t;
    double threshold; // absolute units: t * sigma for Laplace, t * E S otherwise
    double lower;
    double exact;
    double upper;
    double slack_low;  // exact - lower
    double slack_high; // upper - exact
    double tolerance;
    bool pass;
    ExactSource source;
};

/// Seeded instances: n uniform in [n_min, n_max], weights log-uniform in [lo, hi].
std::vector<WeightVector> random_instances(int count, std::uint64_t seed, int n_min = 1, int n_max = 8,
                                           double lo = 0.1, double hi = 10.0);

/// One row per (instance, t). Laplace rows use the two-sided sandwich at t sigma,
/// Exponential rows the one-sided sandwich at t E S, Gamma rows the gamma sandwich at t E S.
std::vector<SandwichRow> sandwich_report(const SandwichConfig& config);

std::size_t count_failures(const std::vector<SandwichRow>& rows);

/// JSON array with every row field.
std::string rows_to_json(const std::vector<SandwichRow>& rows);
/// CSV header "instance,dist,n,t,lower,exact,upper,pass,source" plus one line per row.
std::string rows_to_csv(const std::vector<SandwichRow>& rows);

struct PropertyCheck {
    std::string name;
    bool pass;
    int checked;
    int failed;
    std::string witness; // first failing instance, empty when passing
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;

    bool all_pass() const;
    const PropertyCheck* find(std::string_view name) const;
    std::string to_json() const;
};

PropertyReport property_suite(std::uint64_t seed);

} // namespace expotail
