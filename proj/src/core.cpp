#include "expotail/core.hpp"

#include "expotail/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace expotail {

Distribution Distribution::gamma(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw InvalidInput("gamma shape must be a finite positive number, got " + std::to_string(shape));
    }
    return Distribution(Law::Gamma, shape);
}

double Distribution::mean() const noexcept {
    switch (law_) {
    case Law::Exponential: return 1.0;
    case Law::Gamma: return shape_;
    case Law::Laplace: return 0.0;
    }
    return 0.0;
}

double Distribution::variance() const noexcept {
    switch (law_) {
    case Law::Exponential: return 1.0;
    case Law::Gamma: return shape_;
    case Law::Laplace: return 2.0;
    }
    return 0.0;
}

std::string_view law_name(Law law) {
    switch (law) {
    case Law::Exponential: return "exponential";
    case Law::Gamma: return "gamma";
    case Law::Laplace: return "laplace";
    }
    return "unknown";
}

Law parse_law(std::string_view name) {
    if (name == "exponential") return Law::Exponential;
    if (name == "gamma") return Law::Gamma;
    if (name == "laplace") return Law::Laplace;
    throw InvalidInput("unknown distribution '" + std::string(name) + "'");
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw InvalidInput("weight vector must contain at least one weight");
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double a = weights_[i];
        if (!std::isfinite(a) || !(a > 0.0)) {
            throw InvalidInput("weight " + std::to_string(i) + " must be finite and > 0, got " + std::to_string(a));
        }
    }
    const auto [lo, hi] = std::minmax_element(weights_.begin(), weights_.end());
    min_ = *lo;
    max_ = *hi;
}

WeightVector WeightVector::parse_csv(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(pos, end - pos);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw InvalidInput("cannot parse weight '" + std::string(item) + "'");
        }
        out.push_back(value);
        pos = end + 1;
    }
    return WeightVector(std::move(out));
}

WeightVector WeightVector::parse_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("weights JSON: ") + e.what());
    }
    if (!doc.is_array()) throw InvalidInput("weights JSON must be an array of numbers");
    std::vector<double> out;
    out.reserve(doc.size());
    for (const auto& v : doc) {
        if (!v.is_number()) throw InvalidInput("weights JSON must contain numbers only");
        out.push_back(v.get<double>());
    }
    return WeightVector(std::move(out));
}

WeightStats weight_stats(const WeightVector& w, const Distribution& d) {
    // Sums run over a sorted copy so that every field is exactly permutation invariant.
    std::vector<double> sorted(w.values().begin(), w.values().end());
    std::sort(sorted.begin(), sorted.end());
    double l1 = 0.0;
    double sq = 0.0;
    for (double a : sorted) {
        l1 += a;
        sq += a * a;
    }
    WeightStats s{};
    s.a_max = w.max();
    s.l1 = l1;
    s.l2 = std::sqrt(sq);
    s.sigma = std::sqrt(2.0 * sq);
    s.alpha_sym = s.sigma / s.a_max;
    s.alpha_exp = l1 / s.a_max;
    s.mean_s = d.mean() * l1;
    return s;
}

} // namespace expotail
