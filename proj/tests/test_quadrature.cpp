#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "polyrep/numeric.hpp"
#include "polyrep/quadrature.hpp"

using namespace polyrep;

TEST_CASE("Gauss-Legendre rules are exact on polynomials") {
    for (int q = 2; q <= 8; ++q) {
        const GaussRule r = gauss_legendre(q);
        REQUIRE(r.node.size() == std::size_t(q));
        double wsum = 0.0;
        for (double w : r.weight) wsum += w;
        CHECK(wsum == Catch::Approx(2.0).epsilon(1e-14));
        // exact through degree 2q-1: check x^{2q-2} against 2/(2q-1)
        double s = 0.0;
        for (int i = 0; i < q; ++i) s += r.weight[std::size_t(i)] * std::pow(r.node[std::size_t(i)], 2 * q - 2);
        CHECK(s == Catch::Approx(2.0 / double(2 * q - 1)).epsilon(1e-13));
        // symmetric nodes
        for (int i = 0; i < q; ++i)
            CHECK(r.node[std::size_t(i)] == Catch::Approx(-r.node[std::size_t(q - 1 - i)]).margin(1e-15));
    }
    // and not exact beyond: x^{2q} with q = 3 misses 2/7
    const GaussRule r3 = gauss_legendre(3);
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += r3.weight[std::size_t(i)] * std::pow(r3.node[std::size_t(i)], 6);
    CHECK(std::abs(s - 2.0 / 7.0) > 1e-6);
    CHECK_THROWS_AS(gauss_legendre(1), precondition_error);
    CHECK_THROWS_AS(gauss_legendre(33), precondition_error);
}

TEST_CASE("smooth integrand") {
    QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    const auto q = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, spec);
    CHECK(q.value == Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    CHECK(q.error_estimate <= 1e-12);
}

TEST_CASE("oscillatory integrand gets enough panels") {
    QuadratureSpec spec;
    spec.max_frequency = 50;
    spec.abs_tol = 1e-9;
    // int_0^1 e(50 x) dx = 0
    const auto q = integrate([](double x) { return cis2pi(reduce_mod1(50.0 * x)); }, 0.0, 1.0, spec);
    CHECK(q.panels == 400); // 4 panels per oscillation, reported doubled
    CHECK(std::abs(q.value) <= 1e-9);

    const auto q2 = integrate([](double x) { double s = std::sin(2 * M_PI * 10 * x); return s * s; },
                              0.0, 1.0, spec);
    CHECK(q2.value == Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("unresolvable integrand raises tolerance_error") {
    QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    spec.panel_count = 1;
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / (x + 1e-3); }, 0.0, 1.0, spec),
                    tolerance_error);
}

TEST_CASE("degenerate and invalid ranges") {
    QuadratureSpec spec;
    const auto q = integrate([](double) { return 1.0; }, 0.25, 0.25, spec);
    CHECK(q.value == 0.0);
    CHECK(q.panels == 0);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0, spec), precondition_error);
    QuadratureSpec bad;
    bad.panel_count = 0;
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, bad), precondition_error);
    QuadratureSpec wild;
    wild.max_frequency = 2e9; // 4 per oscillation blows the panel cap
    CHECK_THROWS_AS(panels_for(wild, 0.0, 1.0), precondition_error);
}

TEST_CASE("panel count scales with frequency") {
    QuadratureSpec spec;
    CHECK(panels_for(spec, 0.0, 1.0) == 1);
    spec.max_frequency = 25.0;
    CHECK(panels_for(spec, 0.0, 1.0) == 100);
    spec.max_frequency = 100.0;
    CHECK(panels_for(spec, 0.0, 0.5) == 200);
    spec.max_frequency = 0.1;
    CHECK(panels_for(spec, 0.0, 1.0) == 1);
    spec.max_frequency = 0.0;
    spec.panel_count = 7;
    CHECK(panels_for(spec, 0.0, 1.0) == 7);
}

TEST_CASE("threaded integration is bitwise deterministic") {
    QuadratureSpec spec;
    spec.max_frequency = 200;
    spec.abs_tol = 1e-8;
    auto f = [](double x) { return cis2pi(reduce_mod1(137.0 * x)) * std::exp(-x); };
    const auto s1 = integrate(f, 0.0, 1.0, spec, 1);
    const auto s3 = integrate(f, 0.0, 1.0, spec, 3);
    const auto s8 = integrate(f, 0.0, 1.0, spec, 8);
    CHECK(s1.value.real() == s3.value.real());
    CHECK(s1.value.imag() == s3.value.imag());
    CHECK(s1.value.real() == s8.value.real());
    CHECK(s1.value.imag() == s8.value.imag());
    CHECK(s1.panels == s3.panels);
}
