#include "expotail/errors.hpp"
#include "expotail/legendre.hpp"
#include "expotail/special.hpp"
#include "gen.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace expotail;
using doctest::Approx;

TEST_SUITE("legendre") {

TEST_CASE("log mgf domains") {
    const auto inf = std::numeric_limits<double>::infinity();
    CHECK(log_mgf(Distribution::exponential(), 0.0) == 0.0);
    CHECK(log_mgf(Distribution::exponential(), 0.5) == Approx(std::log(2.0)));
    CHECK(log_mgf(Distribution::exponential(), 1.0) == inf);
    CHECK(log_mgf(Distribution::laplace(), -0.5) == Approx(-std::log(0.75)));
    CHECK(log_mgf(Distribution::laplace(), 1.0) == inf);
    CHECK(log_mgf(Distribution::gamma(3.0), 0.5) == Approx(3.0 * std::log(2.0)));
    CHECK(log_mgf_derivative(Distribution::gamma(3.0), 0.5) == Approx(6.0));
}

TEST_CASE("closed forms") {
    // Exp: I(t) = t - 1 - log t.
    const auto r = rate_function(Distribution::exponential(), 3.0);
    CHECK(r.value == Approx(2.0 - std::log(3.0)).epsilon(1e-14));
    CHECK(r.theta_star == Approx(2.0 / 3.0));
    // Gamma(k): I(t) = t - k - k log(t/k).
    const auto g = rate_function(Distribution::gamma(2.0), 5.0);
    CHECK(g.value == Approx(3.0 - 2.0 * std::log(2.5)).epsilon(1e-14));
    CHECK_THROWS_AS(rate_function(Distribution::exponential(), 1.0), DomainError);
    CHECK_THROWS_AS(rate_function(Distribution::laplace(), -0.1), DomainError);
}

TEST_CASE("Laplace rate function equals h") {
    for (double t : {0.01, 0.3, 1.0, 2.0, 10.0, 300.0}) {
        const auto r = rate_function(Distribution::laplace(), t);
        CHECK(r.converged);
        CHECK(r.value == Approx(h_closed(t)).epsilon(1e-11));
        CHECK(r.theta_star == Approx(h_argmax(t)).epsilon(1e-9));
    }
}

TEST_CASE("property: numeric supremum matches closed forms") {
    gen::Source g(17);
    for (int i = 0; i < 300; ++i) {
        const double shape = g.log_uniform(0.1, 20.0);
        for (const auto& d : {Distribution::exponential(), Distribution::gamma(shape)}) {
            const double t = d.mean() * (1.0 + g.log_uniform(1e-3, 100.0));
            const auto a = rate_function(d, t);
            const auto b = rate_function_numeric(d, t);
            CHECK(b.converged);
            CHECK(b.value == Approx(a.value).epsilon(1e-9).scale(1e-3));
        }
    }
}

TEST_CASE("property: monotone slope, psi(u)/u nondecreasing") {
    for (const auto& d : {Distribution::exponential(), Distribution::laplace(), Distribution::gamma(0.5)}) {
        double prev = -1.0;
        for (int i = 1; i < 400; ++i) {
            const double u = 0.0025 * i;
            const double v = log_mgf(d, u) / u;
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("property: rate function is convex and increasing above the mean") {
    for (const auto& d : {Distribution::exponential(), Distribution::laplace(), Distribution::gamma(3.0)}) {
        double p0 = rate_function(d, d.mean() + 0.1).value;
        double p1 = rate_function(d, d.mean() + 0.2).value;
        CHECK(p1 > p0);
        for (int i = 3; i < 100; ++i) {
            const double p2 = rate_function(d, d.mean() + 0.1 * i).value;
            CHECK(p2 > p1);
            CHECK(p2 - 2.0 * p1 + p0 >= -1e-10);
            p0 = p1;
            p1 = p2;
        }
    }
}

}
