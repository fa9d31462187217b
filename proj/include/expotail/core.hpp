#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace expotail {

enum class Law { Exponential, Gamma, Laplace };

/// Summand law. Exponential has mean 1, Gamma(shape) has mean shape and unit scale,
/// Laplace is the standard two-sided exponential with density exp(-|x|)/2.
class Distribution {
public:
    static Distribution exponential() { return Distribution(Law::Exponential, 1.0); }
    static Distribution gamma(double shape);
    static Distribution laplace() { return Distribution(Law::Laplace, 1.0); }

    Law law() const noexcept { return law_; }
    /// Gamma shape; 1 for Exponential and Laplace.
    double shape() const noexcept { return shape_; }
    double mean() const noexcept;
    double variance() const noexcept;
    bool nonnegative() const noexcept { return law_ != Law::Laplace; }

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    Distribution(Law law, double shape) : law_(law), shape_(shape) {}

    Law law_;
    double shape_;
};

std::string_view law_name(Law law);
/// Parses "exponential", "gamma" or "laplace".
Law parse_law(std::string_view name);

/// Positive summand weights, kept in the order given.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> weights);
    WeightVector(std::initializer_list<double> weights) : WeightVector(std::vector<double>(weights)) {}

    std::span<const double> values() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    double max() const noexcept { return max_; }
    double min() const noexcept { return min_; }

    /// Comma-separated list, e.g. "2,1,0.5".
    static WeightVector parse_csv(std::string_view text);
    /// JSON array of numbers, e.g. "[2, 1, 0.5]".
    static WeightVector parse_json(std::string_view text);

private:
    std::vector<double> weights_;
    double max_ = 0.0;
    double min_ = 0.0;
};

struct WeightStats {
    double sigma;     // sqrt(2 * sum a_i^2), the standard deviation of a Laplace sum
    double a_max;
    double alpha_sym; // sigma / a_max
    double alpha_exp; // l1 / a_max
    double l1;
    double l2;
    double mean_s;    // mu * l1 for nonnegative laws, 0 for Laplace
};

WeightStats weight_stats(const WeightVector& w, const Distribution& d);

} // namespace expotail
