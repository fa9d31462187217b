#include "expotail/expotail.h"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <string>
#include <vector>

using doctest::Approx;

TEST_SUITE("capi") {

TEST_CASE("status strings and version") {
    CHECK(std::string(et_status_string(ET_OK)) == "ok");
    CHECK(std::string(et_status_string(ET_NUMERIC)) == "numeric failure");
    CHECK(std::string(et_version()).size() > 0);
    CHECK(std::string(et_bound_kind_name(ET_BOUND_LAPLACE_UPPER)) == "laplace_upper");
    CHECK(std::string(et_source_name(ET_SOURCE_CF_INVERSION)) == "cf_inversion");
}

TEST_CASE("model lifecycle and errors") {
    et_model* m = nullptr;
    const double bad[] = {1.0, -1.0};
    CHECK(et_model_create(ET_LAW_LAPLACE, 1.0, bad, 2, &m) == ET_INVALID_INPUT);
    CHECK(m == nullptr);
    CHECK(std::string(et_last_error()).find("weight 1") != std::string::npos);
    CHECK(et_model_create(ET_LAW_GAMMA, 0.0, bad, 1, &m) == ET_INVALID_INPUT);
    CHECK(et_model_create(ET_LAW_LAPLACE, 1.0, nullptr, 0, &m) == ET_INVALID_INPUT);
    CHECK(et_model_create(ET_LAW_LAPLACE, 1.0, bad, 1, nullptr) == ET_INVALID_INPUT);

    const double w[] = {2.0, 1.0};
    REQUIRE(et_model_create(ET_LAW_LAPLACE, 1.0, w, 2, &m) == ET_OK);
    CHECK(std::string(et_last_error()).empty());
    CHECK(et_model_size(m) == 2);
    CHECK(et_model_law(m) == ET_LAW_LAPLACE);
    et_stats s;
    REQUIRE(et_model_stats(m, &s) == ET_OK);
    CHECK(s.sigma == Approx(std::sqrt(10.0)));

    et_bound b;
    REQUIRE(et_bound_eval(m, ET_BOUND_LAPLACE_UPPER, 2.0, &b) == ET_OK);
    CHECK(b.value == Approx(0.252953855321830831).epsilon(1e-13));
    CHECK(b.valid == 1);
    CHECK(et_bound_eval(m, ET_BOUND_JANSON_UPPER, 2.0, &b) == ET_UNSUPPORTED_LAW);
    CHECK(et_bound_eval(m, ET_BOUND_GENERIC_UPPER, 2.0, &b) == ET_UNSUPPORTED_LAW);
    CHECK(et_bound_eval(m, ET_BOUND_LAPLACE_LOWER, 0.0, &b) == ET_INVALID_INPUT);
    CHECK(et_bound_eval(m, ET_BOUND_MOMENT_UPPER, 2.0, &b) == ET_INVALID_INPUT);

    double p;
    et_source src;
    REQUIRE(et_exact_tail(m, 2.0 * std::sqrt(10.0), &p, &src) == ET_OK);
    CHECK(p == Approx(0.0279208526098184113).epsilon(1e-13));
    CHECK(src == ET_SOURCE_MIXTURE);
    double err;
    int evals;
    REQUIRE(et_cf_tail(m, 2.0 * std::sqrt(10.0), &p, &err, &evals) == ET_OK);
    CHECK(p == Approx(0.0279208526098184113).epsilon(1e-10));
    CHECK(evals > 0);

    double lo, hi, mom;
    REQUIRE(et_moment_bounds(m, 3.0, ET_MOMENT_PROOF_DERIVED, &lo, &hi) == ET_OK);
    REQUIRE(et_abs_moment(m, 3.0, &mom) == ET_OK);
    CHECK(mom == Approx(62.0));
    CHECK(et_moment_bounds(m, 1.0, ET_MOMENT_PAPER, &lo, &hi) == ET_DOMAIN);

    char* js = nullptr;
    REQUIRE(et_mixture_json(m, &js) == ET_OK);
    CHECK(nlohmann::json::parse(js).is_array());
    et_string_free(js);

    et_estimate e;
    REQUIRE(et_simulate(m, 5.0 * std::sqrt(10.0), 20000, 1, ET_METHOD_TILTED, 1, &e) == ET_OK);
    CHECK(e.method == ET_METHOD_TILTED);
    CHECK(e.n == 20000);
    std::vector<double> xs(1000);
    CHECK(et_sample_sum(m, xs.size(), 1, ET_REP_GAUSSIAN_MIXTURE, 1, xs.data()) == ET_OK);
    et_model_destroy(m);
    et_model_destroy(nullptr);
}

TEST_CASE("nonnegative model") {
    const double w[] = {2.0, 1.0};
    et_model* m = nullptr;
    REQUIRE(et_model_create(ET_LAW_EXPONENTIAL, 1.0, w, 2, &m) == ET_OK);
    et_bound b;
    REQUIRE(et_bound_eval(m, ET_BOUND_JANSON_UPPER, 2.0, &b) == ET_OK);
    CHECK(b.value == Approx(0.315553698656390155).epsilon(1e-13));
    REQUIRE(et_bound_eval(m, ET_BOUND_S_INEQUALITY_UPPER, 2.0, &b) == ET_OK);
    CHECK(b.value == Approx(0.157191039495152904).epsilon(1e-12));
    REQUIRE(et_bound_eval(m, ET_BOUND_PALEY_ZYGMUND_LOWER, 2.0, &b) == ET_OK);
    CHECK(b.value == Approx(0.0440944736657833187).epsilon(1e-13));
    double p;
    REQUIRE(et_p_ge_mean(m, &p) == ET_OK);
    CHECK(p == Approx(0.396473251928995715).epsilon(1e-13));
    double lo, hi;
    CHECK(et_moment_bounds(m, 3.0, ET_MOMENT_PAPER, &lo, &hi) == ET_UNSUPPORTED_LAW);
    et_estimate e;
    CHECK(et_simulate(m, 1.0, 1000, 1, ET_METHOD_TILTED, 1, &e) == ET_INVALID_INPUT);
    et_model_destroy(m);
}

TEST_CASE("parsing") {
    double* w = nullptr;
    size_t n = 0;
    REQUIRE(et_parse_weights("2,1,0.5", &w, &n) == ET_OK);
    CHECK(n == 3);
    CHECK(w[2] == 0.5);
    et_doubles_free(w);
    REQUIRE(et_parse_weights(" [3, 4]", &w, &n) == ET_OK);
    CHECK(n == 2);
    et_doubles_free(w);
    CHECK(et_parse_weights("1,a", &w, &n) == ET_INVALID_INPUT);
    et_law law;
    CHECK(et_parse_law("gamma", &law) == ET_OK);
    CHECK(law == ET_LAW_GAMMA);
    CHECK(et_parse_law("cauchy", &law) == ET_INVALID_INPUT);
}

TEST_CASE("special functions") {
    double v, th;
    REQUIRE(et_h(1.0, &v) == ET_OK);
    CHECK(v == Approx(0.225987155913497333));
    REQUIRE(et_h_sup(1.0, &v, &th) == ET_OK);
    CHECK(v == Approx(0.225987155913497333).epsilon(1e-10));
    REQUIRE(et_rate_function(ET_LAW_EXPONENTIAL, 1.0, 3.0, &v, &th) == ET_OK);
    CHECK(v == Approx(2.0 - std::log(3.0)));
    CHECK(et_rate_function(ET_LAW_EXPONENTIAL, 1.0, 0.5, &v, &th) == ET_DOMAIN);
    REQUIRE(et_r_function(ET_LAW_GAMMA, 0.5, 1.0, &v) == ET_OK);
    CHECK(v == Approx(0.103776874355148676));
    CHECK(et_r_function(ET_LAW_LAPLACE, 1.0, 1.0, &v) == ET_UNSUPPORTED_LAW);
    REQUIRE(et_pz_bound(9.0, &v) == ET_OK);
    CHECK(v == Approx(0.0440944736657833187));
    et_bound b;
    CHECK(et_s_inequality(2.0, 1.5, &b) == ET_INVALID_INPUT);
}

TEST_CASE("verify report and property suite") {
    et_verify_config cfg;
    et_verify_config_init(&cfg);
    cfg.instances = 10;
    cfg.seed = 7;
    et_report* r = nullptr;
    REQUIRE(et_verify(&cfg, &r) == ET_OK);
    CHECK(et_report_row_count(r) == 60);
    CHECK(et_report_failures(r) == 0);
    et_row row;
    REQUIRE(et_report_row(r, 0, &row) == ET_OK);
    CHECK(row.pass == 1);
    CHECK(row.lower <= row.exact);
    CHECK(et_report_row(r, 60, &row) == ET_INVALID_INPUT);
    char* s = nullptr;
    REQUIRE(et_report_json(r, &s) == ET_OK);
    CHECK(nlohmann::json::parse(s).size() == 60);
    et_string_free(s);
    REQUIRE(et_report_csv(r, &s) == ET_OK);
    CHECK(std::string(s).rfind("instance,dist,n,t,lower,exact,upper,pass,source\n", 0) == 0);
    et_string_free(s);
    et_report_destroy(r);

    const double bad_grid[] = {0.9};
    cfg.t_grid = bad_grid;
    cfg.t_count = 1;
    CHECK(et_verify(&cfg, &r) == ET_INVALID_INPUT);

    et_properties* p = nullptr;
    REQUIRE(et_property_suite(3, &p) == ET_OK);
    CHECK(et_properties_all_pass(p) == 1);
    CHECK(et_properties_count(p) >= 6);
    const char* name = nullptr;
    const char* witness = nullptr;
    int pass = 0, checked = 0, failed = -1;
    REQUIRE(et_properties_check(p, 0, &name, &pass, &checked, &failed, &witness) == ET_OK);
    CHECK(std::string(name) == "pz_mean_exceedance");
    CHECK(pass == 1);
    CHECK(checked == 50);
    CHECK(failed == 0);
    et_properties_destroy(p);
}

}
