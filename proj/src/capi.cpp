#include "expotail/expotail.h"

#include "expotail/bounds.hpp"
#include "expotail/errors.hpp"
#include "expotail/harness.hpp"
#include "expotail/legendre.hpp"
#include "expotail/montecarlo.hpp"
#include "expotail/oracle.hpp"
#include "expotail/special.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#ifndef EXPOTAIL_VERSION
#define EXPOTAIL_VERSION "0.0.0"
#endif

using namespace expotail;

struct et_model {
    Distribution dist;
    WeightVector weights;
};

struct et_report {
    std::vector<SandwichRow> rows;
};

struct et_properties {
    PropertyReport report;
};

namespace {

thread_local std::string last_error;

et_status fail(et_status s, const char* what) {
    last_error = what;
    return s;
}

// Runs fn, translating exceptions to status codes.
template <class Fn>
et_status guarded(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return ET_OK;
    } catch (const InvalidInput& e) {
        return fail(ET_INVALID_INPUT, e.what());
    } catch (const UnsupportedLaw& e) {
        return fail(ET_UNSUPPORTED_LAW, e.what());
    } catch (const DomainError& e) {
        return fail(ET_DOMAIN, e.what());
    } catch (const NumericFailure& e) {
        std::string msg = e.what();
        msg += " (last estimate " + std::to_string(e.last_estimate()) + ", error " +
               std::to_string(e.error_estimate()) + ")";
        return fail(ET_NUMERIC, msg.c_str());
    } catch (const std::bad_alloc&) {
        return fail(ET_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(ET_INTERNAL, e.what());
    } catch (...) {
        return fail(ET_INTERNAL, "unknown exception");
    }
}

void require(const void* p, const char* name) {
    if (!p) throw InvalidInput(std::string(name) + " is NULL");
}

Distribution make_distribution(et_law law, double shape) {
    switch (law) {
    case ET_LAW_EXPONENTIAL: return Distribution::exponential();
    case ET_LAW_GAMMA: return Distribution::gamma(shape);
    case ET_LAW_LAPLACE: return Distribution::laplace();
    }
    throw InvalidInput("unknown law code " + std::to_string(static_cast<int>(law)));
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

et_bound to_c(const BoundValue& b) {
    return {b.value, b.log_value, static_cast<et_bound_kind>(b.kind), b.valid ? 1 : 0};
}

et_estimate to_c(const MCEstimate& e) {
    return {e.p_hat, e.std_error, e.ci_low, e.ci_high, e.n, e.hits, static_cast<et_method>(e.method), e.seed,
            e.tilt_theta};
}

double fourth_moment_ratio(const Distribution& d) {
    // Standardized fourth central moment of one Gamma(shape) summand; 9 for Exp(1).
    return 3.0 * (1.0 + 2.0 / d.shape());
}

} // namespace

extern "C" {

const char* et_version(void) { return EXPOTAIL_VERSION; }

const char* et_status_string(et_status status) {
    switch (status) {
    case ET_OK: return "ok";
    case ET_INVALID_INPUT: return "invalid input";
    case ET_DOMAIN: return "domain error";
    case ET_UNSUPPORTED_LAW: return "unsupported law";
    case ET_NUMERIC: return "numeric failure";
    case ET_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* et_last_error(void) { return last_error.c_str(); }

void et_string_free(char* s) { std::free(s); }
void et_doubles_free(double* p) { std::free(p); }

et_status et_parse_law(const char* name, et_law* out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        *out = static_cast<et_law>(parse_law(name));
    });
}

const char* et_law_name(et_law law) {
    switch (law) {
    case ET_LAW_EXPONENTIAL: return "exponential";
    case ET_LAW_GAMMA: return "gamma";
    case ET_LAW_LAPLACE: return "laplace";
    }
    return "unknown";
}

et_status et_parse_weights(const char* text, double** out, size_t* count) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        require(count, "count");
        std::string_view sv(text);
        const auto first = sv.find_first_not_of(" \t\r\n");
        const bool json = first != std::string_view::npos && sv[first] == '[';
        const WeightVector w = json ? WeightVector::parse_json(sv) : WeightVector::parse_csv(sv);
        auto* buf = static_cast<double*>(std::malloc(w.size() * sizeof(double)));
        if (!buf) throw std::bad_alloc();
        std::copy(w.values().begin(), w.values().end(), buf);
        *out = buf;
        *count = w.size();
    });
}

const char* et_bound_kind_name(et_bound_kind kind) {
    if (kind < ET_BOUND_JANSON_UPPER || kind > ET_BOUND_PALEY_ZYGMUND_LOWER) return "unknown";
    return bound_kind_name(static_cast<BoundKind>(kind)).data();
}

const char* et_source_name(et_source source) {
    if (source < ET_SOURCE_MIXTURE || source > ET_SOURCE_IMPORTANCE_SAMPLING) return "unknown";
    return exact_source_name(static_cast<ExactSource>(source)).data();
}

et_status et_model_create(et_law law, double shape, const double* weights, size_t count, et_model** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        if (count > 0) require(weights, "weights");
        const Distribution d = make_distribution(law, shape);
        WeightVector w(std::vector<double>(weights, weights + count));
        *out = new et_model{d, std::move(w)};
    });
}

void et_model_destroy(et_model* model) { delete model; }

et_status et_model_stats(const et_model* model, et_stats* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        const WeightStats s = weight_stats(model->weights, model->dist);
        *out = {s.sigma, s.a_max, s.alpha_sym, s.alpha_exp, s.l1, s.l2, s.mean_s};
    });
}

size_t et_model_size(const et_model* model) { return model ? model->weights.size() : 0; }

et_law et_model_law(const et_model* model) {
    return model ? static_cast<et_law>(model->dist.law()) : ET_LAW_EXPONENTIAL;
}

et_status et_bound_eval(const et_model* model, et_bound_kind kind, double t, et_bound* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        const Distribution& d = model->dist;
        const WeightVector& w = model->weights;
        const WeightStats s = weight_stats(w, d);
        auto need = [&](Law law, const char* what) {
            if (d.law() != law) {
                throw UnsupportedLaw(std::string(what) + " is defined for " + std::string(law_name(law)) +
                                     " summands only");
            }
        };
        auto need_nonnegative = [&](const char* what) {
            if (!d.nonnegative()) throw UnsupportedLaw(std::string(what) + " needs nonnegative summands");
        };
        switch (kind) {
        case ET_BOUND_JANSON_UPPER: need(Law::Exponential, "janson_upper"); *out = to_c(janson_upper(t, s)); break;
        case ET_BOUND_JANSON_LOWER: need(Law::Exponential, "janson_lower"); *out = to_c(janson_lower(t, s)); break;
        case ET_BOUND_LAPLACE_UPPER: need(Law::Laplace, "laplace_upper"); *out = to_c(laplace_upper(t, s)); break;
        case ET_BOUND_LAPLACE_LOWER: need(Law::Laplace, "laplace_lower"); *out = to_c(laplace_lower(t, s)); break;
        case ET_BOUND_GENERIC_UPPER: *out = to_c(generic_upper(d, w, t)); break;
        case ET_BOUND_GENERIC_LOWER:
            need_nonnegative("generic_lower");
            *out = to_c(generic_lower(d, w, t, p_ge_mean(d, w)));
            break;
        case ET_BOUND_GAMMA_UPPER: *out = to_c(gamma_upper(d, w, t)); break;
        case ET_BOUND_GAMMA_LOWER: *out = to_c(gamma_lower(d, w, t)); break;
        case ET_BOUND_S_INEQUALITY_UPPER:
            need_nonnegative("s_inequality_upper");
            *out = to_c(s_inequality_upper(t, p_ge_mean(d, w)));
            break;
        case ET_BOUND_PALEY_ZYGMUND_LOWER: {
            need_nonnegative("paley_zygmund_lower");
            const double v = pz_bound(fourth_moment_ratio(d));
            *out = {v, std::log(v), ET_BOUND_PALEY_ZYGMUND_LOWER, 1};
            break;
        }
        case ET_BOUND_MOMENT_UPPER:
        case ET_BOUND_MOMENT_LOWER:
            throw InvalidInput("moment bounds are evaluated with et_moment_bounds");
        default: throw InvalidInput("unknown bound kind " + std::to_string(static_cast<int>(kind)));
        }
    });
}

et_status et_generic_lower(const et_model* model, double t, double p_ge, et_bound* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        *out = to_c(generic_lower(model->dist, model->weights, t, p_ge));
    });
}

et_status et_s_inequality(double t, double p_ge, et_bound* out) {
    return guarded([&] {
        require(out, "out");
        *out = to_c(s_inequality_upper(t, p_ge));
    });
}

et_status et_pz_bound(double ratio, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = pz_bound(ratio);
    });
}

et_status et_exact_tail(const et_model* model, double threshold, double* p, et_source* source) {
    return guarded([&] {
        require(model, "model");
        require(p, "p");
        const TailValue tv = exact_tail(model->dist, model->weights, threshold);
        *p = tv.p;
        if (source) *source = static_cast<et_source>(tv.source);
    });
}

et_status et_cf_tail(const et_model* model, double threshold, double* p, double* error_estimate,
                     int* evaluations) {
    return guarded([&] {
        require(model, "model");
        require(p, "p");
        const CfInversionResult r = cf_tail_inversion_detail(model->dist, model->weights, threshold);
        *p = r.value;
        if (error_estimate) *error_estimate = r.error_estimate;
        if (evaluations) *evaluations = r.evaluations;
    });
}

et_status et_p_ge_mean(const et_model* model, double* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        *out = p_ge_mean(model->dist, model->weights);
    });
}

et_status et_mixture_json(const et_model* model, char** out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        std::optional<ExpMixture> mix;
        switch (model->dist.law()) {
        case Law::Exponential: mix = hypoexp_mixture(model->weights); break;
        case Law::Laplace: mix = laplace_mixture(model->weights); break;
        case Law::Gamma: throw UnsupportedLaw("gamma sums have no finite exponential mixture");
        }
        if (!mix) throw NumericFailure("partial fractions are ill-conditioned for these weights", 0.0, 0.0);
        *out = duplicate(mix->to_json());
    });
}

et_status et_moment_bounds(const et_model* model, double p, et_moment_mode mode, double* lower, double* upper) {
    return guarded([&] {
        require(model, "model");
        require(lower, "lower");
        require(upper, "upper");
        if (model->dist.law() != Law::Laplace) throw UnsupportedLaw("moment bounds are for Laplace sums");
        const MomentBounds b = moment_bounds(p, model->weights,
                                             mode == ET_MOMENT_PAPER ? MomentMode::Paper : MomentMode::ProofDerived);
        *lower = b.lower;
        *upper = b.upper;
    });
}

et_status et_abs_moment(const et_model* model, double p, double* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        if (model->dist.law() != Law::Laplace) throw UnsupportedLaw("absolute moments are for Laplace sums");
        *out = laplace_abs_moment(model->weights, p);
    });
}

et_status et_simulate(const et_model* model, double threshold, uint64_t n, uint64_t seed, et_method method,
                      unsigned threads, et_estimate* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        switch (method) {
        case ET_METHOD_PLAIN: *out = to_c(mc_tail(model->dist, model->weights, threshold, n, seed, threads)); break;
        case ET_METHOD_TILTED: *out = to_c(is_tail(model->dist, model->weights, threshold, n, seed, threads)); break;
        default: throw InvalidInput("unknown method code");
        }
    });
}

et_status et_sample_sum(const et_model* model, uint64_t n, uint64_t seed, et_representation rep, unsigned threads,
                        double* out) {
    return guarded([&] {
        require(model, "model");
        if (n > 0) require(out, "out");
        const auto r = rep == ET_REP_GAUSSIAN_MIXTURE ? Representation::GaussianMixture : Representation::Direct;
        const std::vector<double> v = sample_sum(model->dist, model->weights, n, seed, r, threads);
        std::copy(v.begin(), v.end(), out);
    });
}

et_status et_h(double u, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = h_closed(u);
    });
}

et_status et_h_sup(double u, double* value, double* argmax) {
    return guarded([&] {
        require(value, "value");
        const SupResult r = h_sup(u);
        *value = r.value;
        if (argmax) *argmax = r.argmax;
    });
}

et_status et_rate_function(et_law law, double shape, double t, double* value, double* theta) {
    return guarded([&] {
        require(value, "value");
        const LegendreResult r = rate_function(make_distribution(law, shape), t);
        *value = r.value;
        if (theta) *theta = r.theta_star;
    });
}

et_status et_r_function(et_law law, double shape, double v, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = r_function(make_distribution(law, shape), v);
    });
}

void et_verify_config_init(et_verify_config* config) {
    if (!config) return;
    static const double grid[] = {1.1, 1.5, 2.0, 3.0, 5.0, 10.0};
    const SandwichConfig defaults;
    *config = {ET_LAW_LAPLACE,
               1.0,
               defaults.instances,
               defaults.n_min,
               defaults.n_max,
               defaults.weight_lo,
               defaults.weight_hi,
               grid,
               sizeof grid / sizeof grid[0],
               defaults.seed,
               nullptr,
               0,
               defaults.fallback_samples,
               defaults.threads};
}

et_status et_verify(const et_verify_config* config, et_report** out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = nullptr;
        if (config->t_count > 0) require(config->t_grid, "t_grid");
        SandwichConfig c;
        c.distribution = make_distribution(config->law, config->shape);
        c.instances = config->instances;
        c.n_min = config->n_min;
        c.n_max = config->n_max;
        c.weight_lo = config->weight_lo;
        c.weight_hi = config->weight_hi;
        c.t_grid.assign(config->t_grid, config->t_grid + config->t_count);
        c.seed = config->seed;
        if (config->weights) {
            c.weights = WeightVector(std::vector<double>(config->weights, config->weights + config->weight_count));
        }
        c.fallback_samples = config->fallback_samples;
        c.threads = config->threads;
        *out = new et_report{sandwich_report(c)};
    });
}

void et_report_destroy(et_report* report) { delete report; }

size_t et_report_row_count(const et_report* report) { return report ? report->rows.size() : 0; }

size_t et_report_failures(const et_report* report) { return report ? count_failures(report->rows) : 0; }

et_status et_report_row(const et_report* report, size_t index, et_row* out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        if (index >= report->rows.size()) throw InvalidInput("row index out of range");
        const SandwichRow& r = report->rows[index];
        *out = {r.instance,     r.weights.size(), r.t,         r.threshold,  r.lower,
                r.exact,        r.upper,          r.slack_low, r.slack_high, r.tolerance,
                r.pass ? 1 : 0, static_cast<et_source>(r.source)};
    });
}

et_status et_report_json(const et_report* report, char** out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        *out = duplicate(rows_to_json(report->rows));
    });
}

et_status et_report_csv(const et_report* report, char** out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        *out = duplicate(rows_to_csv(report->rows));
    });
}

et_status et_property_suite(uint64_t seed, et_properties** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        *out = new et_properties{property_suite(seed)};
    });
}

void et_properties_destroy(et_properties* props) { delete props; }

size_t et_properties_count(const et_properties* props) { return props ? props->report.checks.size() : 0; }

int et_properties_all_pass(const et_properties* props) { return props && props->report.all_pass() ? 1 : 0; }

et_status et_properties_check(const et_properties* props, size_t index, const char** name, int* pass,
                              int* checked, int* failed, const char** witness) {
    return guarded([&] {
        require(props, "props");
        if (index >= props->report.checks.size()) throw InvalidInput("check index out of range");
        const PropertyCheck& c = props->report.checks[index];
        if (name) *name = c.name.c_str();
        if (pass) *pass = c.pass ? 1 : 0;
        if (checked) *checked = c.checked;
        if (failed) *failed = c.failed;
        if (witness) *witness = c.witness.c_str();
    });
}

et_status et_properties_json(const et_properties* props, char** out) {
    return guarded([&] {
        require(props, "props");
        require(out, "out");
        *out = duplicate(props->report.to_json());
    });
}

} // extern "C"
