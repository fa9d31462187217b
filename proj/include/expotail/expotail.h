#ifndef EXPOTAIL_H
#define EXPOTAIL_H

/* C interface to the expotail library. All handles are opaque; every call that can
   fail returns an et_status and leaves a message retrievable with et_last_error()
   on the calling thread. Strings returned through char** are owned by the caller
   and released with et_string_free(). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef EXPOTAIL_BUILDING
#    define ET_API __declspec(dllexport)
#  else
#    define ET_API __declspec(dllimport)
#  endif
#else
#  define ET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum et_status {
    ET_OK = 0,
    ET_INVALID_INPUT = 1,
    ET_DOMAIN = 2,
    ET_UNSUPPORTED_LAW = 3,
    ET_NUMERIC = 4,
    ET_INTERNAL = 5
} et_status;

typedef enum et_law { ET_LAW_EXPONENTIAL = 0, ET_LAW_GAMMA = 1, ET_LAW_LAPLACE = 2 } et_law;

/* Same order as the C++ BoundKind. */
typedef enum et_bound_kind {
    ET_BOUND_JANSON_UPPER = 0,
    ET_BOUND_JANSON_LOWER,
    ET_BOUND_LAPLACE_UPPER,
    ET_BOUND_LAPLACE_LOWER,
    ET_BOUND_GENERIC_UPPER,
    ET_BOUND_GENERIC_LOWER,
    ET_BOUND_GAMMA_UPPER,
    ET_BOUND_GAMMA_LOWER,
    ET_BOUND_S_INEQUALITY_UPPER,
    ET_BOUND_MOMENT_UPPER,
    ET_BOUND_MOMENT_LOWER,
    ET_BOUND_PALEY_ZYGMUND_LOWER
} et_bound_kind;

typedef enum et_source { ET_SOURCE_MIXTURE = 0, ET_SOURCE_CF_INVERSION, ET_SOURCE_IMPORTANCE_SAMPLING } et_source;
typedef enum et_method { ET_METHOD_PLAIN = 0, ET_METHOD_TILTED = 1 } et_method;
typedef enum et_representation { ET_REP_DIRECT = 0, ET_REP_GAUSSIAN_MIXTURE = 1 } et_representation;
typedef enum et_moment_mode { ET_MOMENT_PAPER = 0, ET_MOMENT_PROOF_DERIVED = 1 } et_moment_mode;

typedef struct et_model et_model;
typedef struct et_report et_report;
typedef struct et_properties et_properties;

typedef struct et_stats {
    double sigma;
    double a_max;
    double alpha_sym;
    double alpha_exp;
    double l1;
    double l2;
    double mean_s;
} et_stats;

typedef struct et_bound {
    double value;
    double log_value;
    et_bound_kind kind;
    int valid;
} et_bound;

typedef struct et_estimate {
    double p_hat;
    double std_error;
    double ci_low;
    double ci_high;
    uint64_t n;
    uint64_t hits;
    et_method method;
    uint64_t seed;
    double tilt_theta;
} et_estimate;

typedef struct et_row {
    int instance;
    size_t n;
    double t;
    double threshold;
    double lower;
    double exact;
    double upper;
    double slack_low;
    double slack_high;
    double tolerance;
    int pass;
    et_source source;
} et_row;

/* Fill with et_verify_config_init, then override. t_grid and weights are borrowed
   for the duration of et_verify only; weights == NULL means random instances. */
typedef struct et_verify_config {
    et_law law;
    double shape;
    int instances;
    int n_min;
    int n_max;
    double weight_lo;
    double weight_hi;
    const double* t_grid;
    size_t t_count;
    uint64_t seed;
    const double* weights;
    size_t weight_count;
    uint64_t fallback_samples;
    unsigned threads;
} et_verify_config;

ET_API const char* et_version(void);
ET_API const char* et_status_string(et_status status);
/* Message of the last failing call on this thread; "" if none. */
ET_API const char* et_last_error(void);
ET_API void et_string_free(char* s);
ET_API void et_doubles_free(double* p);

ET_API et_status et_parse_law(const char* name, et_law* out);
ET_API const char* et_law_name(et_law law);
/* "2,1,0.5" or a JSON array. The array is released with et_doubles_free. */
ET_API et_status et_parse_weights(const char* text, double** out, size_t* count);
ET_API const char* et_bound_kind_name(et_bound_kind kind);
ET_API const char* et_source_name(et_source source);

/* shape is ignored unless law == ET_LAW_GAMMA. */
ET_API et_status et_model_create(et_law law, double shape, const double* weights, size_t count, et_model** out);
ET_API void et_model_destroy(et_model* model);
ET_API et_status et_model_stats(const et_model* model, et_stats* out);
ET_API size_t et_model_size(const et_model* model);
ET_API et_law et_model_law(const et_model* model);

/* t in relative units (multiples of sigma for Laplace, of E S otherwise).
   Generic lower and S-inequality kinds take P(S >= E S) from the exact oracle. */
ET_API et_status et_bound_eval(const et_model* model, et_bound_kind kind, double t, et_bound* out);
ET_API et_status et_generic_lower(const et_model* model, double t, double p_ge_mean, et_bound* out);
ET_API et_status et_s_inequality(double t, double p_ge_mean, et_bound* out);
ET_API et_status et_pz_bound(double fourth_moment_ratio, double* out);

/* Absolute threshold. */
ET_API et_status et_exact_tail(const et_model* model, double threshold, double* p, et_source* source);
ET_API et_status et_cf_tail(const et_model* model, double threshold, double* p, double* error_estimate,
                            int* evaluations);
ET_API et_status et_p_ge_mean(const et_model* model, double* out);
ET_API et_status et_mixture_json(const et_model* model, char** out);

/* Laplace models only. */
ET_API et_status et_moment_bounds(const et_model* model, double p, et_moment_mode mode, double* lower,
                                  double* upper);
ET_API et_status et_abs_moment(const et_model* model, double p, double* out);

/* threads = 0 uses every core; results do not depend on it. */
ET_API et_status et_simulate(const et_model* model, double threshold, uint64_t n, uint64_t seed, et_method method,
                             unsigned threads, et_estimate* out);
/* Writes n samples of the sum into a caller buffer of length n. */
ET_API et_status et_sample_sum(const et_model* model, uint64_t n, uint64_t seed, et_representation rep,
                               unsigned threads, double* out);

ET_API et_status et_h(double u, double* out);
ET_API et_status et_h_sup(double u, double* value, double* argmax);
ET_API et_status et_rate_function(et_law law, double shape, double t, double* value, double* theta);
ET_API et_status et_r_function(et_law law, double shape, double v, double* out);

ET_API void et_verify_config_init(et_verify_config* config);
ET_API et_status et_verify(const et_verify_config* config, et_report** out);
ET_API void et_report_destroy(et_report* report);
ET_API size_t et_report_row_count(const et_report* report);
ET_API size_t et_report_failures(const et_report* report);
ET_API et_status et_report_row(const et_report* report, size_t index, et_row* out);
ET_API et_status et_report_json(const et_report* report, char** out);
ET_API et_status et_report_csv(const et_report* report, char** out);

ET_API et_status et_property_suite(uint64_t seed, et_properties** out);
ET_API void et_properties_destroy(et_properties* props);
ET_API size_t et_properties_count(const et_properties* props);
ET_API int et_properties_all_pass(const et_properties* props);
/* name and witness stay valid until the handle is destroyed. */
ET_API et_status et_properties_check(const et_properties* props, size_t index, const char** name, int* pass,
                                     int* checked, int* failed, const char** witness);
ET_API et_status et_properties_json(const et_properties* props, char** out);

#ifdef __cplusplus
}
#endif

#endif
