#pragma once

#include "expotail/core.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace expotail {

/// Counter-based generator: draw k of substream (seed, stream) is a pure function of
/// (seed, stream, k), so chunks can be generated on any thread in any order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    double exponential() noexcept;
    double normal() noexcept;
    double gamma(double shape) noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

enum class Representation { Direct, GaussianMixture };
enum class McMethod { Plain, Tilted };

std::string_view method_name(McMethod m);

struct MCEstimate {
    double p_hat;
    double std_error;
    double ci_low;
    double ci_high;
    std::uint64_t n;
    std::uint64_t hits;
    McMethod method;
    std::uint64_t seed;
    double tilt_theta;
};

/// Samples are generated in fixed chunks of this size, chunk k from substream (seed, k).
inline constexpr std::uint64_t kChunkSize = 8192;

/// threads = 0 uses the hardware concurrency. Results do not depend on the thread count.
std::vector<double> sample_sum(const Distribution& d, const WeightVector& w, std::uint64_t n, std::uint64_t seed,
                               Representation rep = Representation::Direct, unsigned threads = 0);

/// Hit-fraction estimate of P(S > threshold), n >= 100. 95% interval: normal above 30 hits,
/// Clopper-Pearson otherwise.
MCEstimate mc_tail(const Distribution& d, const WeightVector& w, double threshold, std::uint64_t n,
                   std::uint64_t seed, unsigned threads = 0);

/// Chernoff tilt: root of sum_i a_i psi'(theta a_i) = threshold, capped at 0.999 / a_max.
double chernoff_tilt(const Distribution& d, const WeightVector& w, double threshold);

/// Importance sampling under the exponentially tilted product law with the Chernoff tilt.
/// The threshold must lie strictly above E S.
MCEstimate is_tail(const Distribution& d, const WeightVector& w, double threshold, std::uint64_t n,
                   std::uint64_t seed, unsigned threads = 0);

/// Same estimator with a caller-chosen tilt; theta * a_i must stay inside the MGF domain.
/// threshold = -inf estimates E[likelihood ratio], which is 1.
MCEstimate is_tail_with_tilt(const Distribution& d, const WeightVector& w, double threshold, double theta,
                             std::uint64_t n, std::uint64_t seed, unsigned threads = 0);

} // namespace expotail
