#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "polyrep/arcintegral.hpp"
#include "polyrep/repcount.hpp"

using namespace polyrep;

namespace {

const MangoldtTable& table() {
    static const MangoldtTable t = build_mangoldt(1200);
    return t;
}

QuadratureSpec spec_tol(double tol) {
    QuadratureSpec s;
    s.abs_tol = tol;
    return s;
}

} // namespace

TEST_CASE("kernel integral approaches its closed form") {
    QuadratureSpec spec = spec_tol(1e-9);
    spec.max_frequency = 100;
    const KernelResult r = kernel_integral(100, 1.0, 100, 0.5, spec);
    CHECK(r.main == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::abs(r.value - r.main) <= 2.0 / (100.0 * 0.5)); // O-term at mu=1

    QuadratureSpec spec2 = spec_tol(1e-9);
    spec2.max_frequency = 150;
    const KernelResult r2 = kernel_integral(150, 2.0, 150, 0.5, spec2);
    CHECK(r2.main == Catch::Approx(std::exp(-1.0) * 150.0).epsilon(1e-12)); // Gamma(2) = 1
}

TEST_CASE("kernel error shrinks with X at the predicted rate") {
    QuadratureSpec spec = spec_tol(1e-9);
    spec.max_frequency = 200;
    const KernelResult half = kernel_integral(200, 2.0, 200, 0.5, spec);
    const KernelResult quarter = kernel_integral(200, 2.0, 200, 0.25, spec);
    const double e_half = std::abs(half.value - half.main);
    const double e_quarter = std::abs(quarter.value - quarter.main);
    INFO("err(1/4)=" << e_quarter << " err(1/2)=" << e_half);
    // X^{-mu} predicts a factor 4; allow the constant to eat up to all of it
    CHECK(e_quarter >= e_half * (4.0 / 4.0));
    CHECK(e_quarter <= e_half * 400.0); // sanity: same power law, not a different one
}

TEST_CASE("kernel preconditions") {
    QuadratureSpec spec; // max_frequency left at 0
    CHECK_THROWS_AS(kernel_integral(100, 1.0, 100, 0.5, spec), precondition_error);
    spec.max_frequency = 100;
    CHECK_THROWS_AS(kernel_integral(100, 0.0, 100, 0.5, spec), precondition_error);
    CHECK_THROWS_AS(kernel_integral(100, 1.0, 100, 0.6, spec), precondition_error);
    CHECK_THROWS_AS(kernel_integral(100, 1.0, 100, 0.0, spec), precondition_error);
    CHECK_THROWS_AS(kernel_integral(0, 1.0, 100, 0.5, spec), precondition_error);
    CHECK_THROWS_AS(kernel_integral(100, 1.0, 0, 0.5, spec), precondition_error);
}

TEST_CASE("l2 error integral") {
    const IntPolynomial sq = IntPolynomial::monomial(2);
    const TruncationPlan plan = plan_truncation(sq, 400, 1e-12);
    const QuadratureSpec spec = spec_tol(1e-6);

    SECTION("empty interval") {
        const auto q = l2_error_integral(sq, 400, 0.0, plan, spec, table());
        CHECK(q.value == 0.0);
        CHECK(q.panels == 0);
    }
    SECTION("pointwise oracle at the center") {
        const DampedSeries s(sq, sq, 400, plan, table());
        const double center = std::norm(std::complex<double>(s.mass(), 0.0) -
                                        gamma_const(2) * std::sqrt(400.0));
        const double xi = 1e-9;
        const auto q = l2_error_integral(sq, 400, xi, plan, spec, table());
        CHECK(q.value == Catch::Approx(2.0 * xi * center).epsilon(1e-6));
    }
    SECTION("monotone in xi") {
        const auto a = l2_error_integral(sq, 400, 0.01, plan, spec, table());
        const auto b = l2_error_integral(sq, 400, 0.02, plan, spec, table());
        CHECK(a.value >= 0.0);
        CHECK(b.value >= a.value * (1.0 - 1e-9) - a.error_estimate - b.error_estimate);
    }
    SECTION("domain checks") {
        CHECK_THROWS_AS(l2_error_integral(sq, 400, 0.6, plan, spec, table()), precondition_error);
        CHECK_THROWS_AS(l2_error_integral(sq, 400, -0.1, plan, spec, table()), precondition_error);
    }
}

TEST_CASE("mean-square integral F") {
    const IntPolynomial sq = IntPolynomial::monomial(2);
    const long long n = 100;
    const TruncationPlan plan = plan_truncation(sq, n, 1e-12);
    const DampedSeries s(sq, sq, n, plan, table());

    QuadratureSpec spec = spec_tol(1e-8);
    spec.max_frequency = 2.0 * double(s.max_abs_freq()); // 8 panels per true period

    const auto f1 = tolev_F(sq, n, 0.05, plan, spec, table());
    const auto f2 = tolev_F(sq, n, 0.2, plan, spec, table());
    const auto f3 = tolev_F(sq, n, 0.5, plan, spec, table());
    CHECK(f1.value >= 0.0);
    CHECK(f2.value >= f1.value * (1.0 - 1e-12));
    CHECK(f3.value >= f2.value * (1.0 - 1e-12));

    // Parseval: distinct phi values kill every cross term over the circle
    double direct = 0.0;
    for (double w : s.weights()) direct += w * w;

    // grid form is exact (trig polynomial of degree 2*band < M)
    const long long m = 16384;
    REQUIRE(m > 2 * s.max_abs_freq());
    const cvec g = grid_eval(s, m);
    double mean_sq = 0.0;
    for (const auto& v : g) mean_sq += std::norm(v);
    mean_sq /= double(m);
    CHECK(mean_sq == Catch::Approx(direct).epsilon(1e-12));

    // quadrature form reaches the same constant
    CHECK(2.0 * f3.value == Catch::Approx(direct).epsilon(1e-8));

    CHECK_THROWS_AS(tolev_F(sq, n, 0.0, plan, spec, table()), precondition_error);
    CHECK_THROWS_AS(tolev_F(sq, n, 0.51, plan, spec, table()), precondition_error);
}

TEST_CASE("central approximant integral i1") {
    SECTION("k = j collapses the companion to the plain damped count") {
        const auto r = i1(500, 50, 2, 2, 1, 0.01, spec_tol(1e-8));
        double plain = 0.0;
        for (long long m = 501; m <= 550; ++m) plain += std::exp(-double(m) / 500.0);
        CHECK(r.companion == Catch::Approx(plain).epsilon(1e-12));
    }
    SECTION("lemma budget at the pinned point") {
        const double b = std::pow(10.0, 0.4);
        const double tau = b / 1000.0;
        const auto r = i1(10000, 1000, 3, 2, 1, tau, spec_tol(1e-4));
        const double budget = 10.0 * (1000.0 / 10000.0) * std::pow(1000.0 / b, 1.5);
        INFO("gap=" << std::abs(r.value - r.companion) << " budget=" << budget);
        CHECK(std::abs(r.value - r.companion) <= budget);
    }
    SECTION("the integral vanishes with tau") {
        const auto r = i1(100, 10, 2, 2, 1, 1e-9, spec_tol(1e-8));
        CHECK(std::abs(r.value) <= 2e-9 * 10.0 * 100.0 + 1e-9); // 2 tau H N^{j/k}
    }
    SECTION("preconditions") {
        CHECK_THROWS_AS(i1(0, 10, 2, 2, 1, 0.1, spec_tol(1e-6)), precondition_error);
        CHECK_THROWS_AS(i1(100, 0, 2, 2, 1, 0.1, spec_tol(1e-6)), precondition_error);
        CHECK_THROWS_AS(i1(100, 10, 0, 2, 1, 0.1, spec_tol(1e-6)), precondition_error);
        CHECK_THROWS_AS(i1(100, 10, 2, 0, 1, 0.1, spec_tol(1e-6)), precondition_error);
        CHECK_THROWS_AS(i1(100, 10, 2, 2, 0, 0.1, spec_tol(1e-6)), precondition_error);
        CHECK_THROWS_AS(i1(100, 10, 2, 2, 1, 0.0, spec_tol(1e-6)), precondition_error);
        CHECK_THROWS_AS(i1(100, 10, 2, 2, 1, 0.51, spec_tol(1e-6)), precondition_error);
    }
}

TEST_CASE("decomposition recombines to the full circle") {
    const IntPolynomial sq = IntPolynomial::monomial(2);
    const long long n = 300, h = 96; // H = N^{0.8}
    const double tau = std::pow(300.0, 0.1) / double(h);
    const TruncationPlan plan = plan_truncation(sq, n, 1e-12);
    const QuadratureSpec spec = spec_tol(1e-5);

    const auto r1 = i1(n, h, 2, 2, 1, tau, spec);
    const auto r2 = i2(sq, 2, n, h, tau, plan, spec, table());
    const auto r3 = i3(sq, 2, n, h, tau, plan, spec, table());
    const double g2 = gamma_const(2) * gamma_const(2);
    const std::complex<double> sum = g2 * r1.value + r2.value + r3.value;

    const DampedSeries s(sq, sq, n, plan, table());
    const long long m_g = 65536;
    REQUIRE(m_g > 2 * s.max_abs_freq() + n + h);
    const double full = full_circle_sum(sq, 2, n, h, plan, m_g, table());

    const double slack = 10.0 * (g2 * r1.error_estimate + r2.error_estimate + r3.error_estimate) + 1e-8;
    INFO("sum=" << sum << " full=" << full << " slack=" << slack);
    CHECK(std::abs(sum.real() - full) <= slack);
    CHECK(std::abs(sum.imag()) <= 1e-8 * std::max(1.0, std::abs(full)));
}

TEST_CASE("i2 and i3 preconditions") {
    const IntPolynomial sq = IntPolynomial::monomial(2);
    const TruncationPlan plan = plan_truncation(sq, 100, 1e-10);
    const QuadratureSpec spec = spec_tol(1e-6);
    CHECK_THROWS_AS(i2(sq, 0, 100, 10, 0.1, plan, spec, table()), precondition_error);
    CHECK_THROWS_AS(i2(sq, 2, 100, 0, 0.1, plan, spec, table()), precondition_error);
    CHECK_THROWS_AS(i2(sq, 2, 100, 10, 0.0, plan, spec, table()), precondition_error);
    CHECK_THROWS_AS(i3(sq, 0, 100, 10, 0.1, plan, spec, table()), precondition_error);
    CHECK_THROWS_AS(i3(sq, 2, 100, 10, 0.6, plan, spec, table()), precondition_error);
    // tau = 1/2 leaves no flank at all
    const auto r = i3(sq, 2, 100, 10, 0.5, plan, spec, table());
    CHECK(r.value == std::complex<double>(0.0, 0.0));
    CHECK(r.panels == 0);
}

TEST_CASE("flank integral obeys the crude mean-square bound") {
    const IntPolynomial sq = IntPolynomial::monomial(2);
    const long long n = 2000, h = 200;
    const double tau = 0.05;
    const TruncationPlan plan = plan_truncation(sq, n, 1e-4);
    const QuadratureSpec spec = spec_tol(1e-4);

    const auto r3 = i3(sq, 2, n, h, tau, plan, spec, table());
    const auto f_tau = tolev_F(sq, n, tau, plan, spec, table());
    const auto f_half = tolev_F(sq, n, 0.5, plan, spec, table());
    // |U(-alpha, H)| <= 1/sin(pi tau) everywhere on the flanks
    const double u_cap = 1.0 / std::sin(M_PI * tau);
    const double bound = (2.0 * f_half.value - 2.0 * f_tau.value) * u_cap;
    INFO("|i3|=" << std::abs(r3.value) << " bound=" << bound);
    CHECK(std::abs(r3.value) <= bound * 1.001 + 1e-9);
}

TEST_CASE("full circle matches the brute-force window") {
    const IntPolynomial sq = IntPolynomial::monomial(2);
    const TruncationPlan plan = plan_truncation(sq, 200, 1e-12);
    const double full = full_circle_sum(sq, 2, 200, 20, plan, 32768, table());
    const RepSeries brute = rep_brute(sq, 2, 200, 20, table());
    const double direct = weighted_interval_sum(brute);
    CHECK(full == Catch::Approx(direct).epsilon(1e-8));
}

TEST_CASE("full circle at j = 1 is a direct scan") {
    const IntPolynomial sq = IntPolynomial::monomial(2);
    const TruncationPlan plan = plan_truncation(sq, 200, 1e-12);
    const double full = full_circle_sum(sq, 1, 200, 100, plan, 16384, table());
    // 200 < m^2 <= 300 picks up m = 15 (composite), 16, 17
    const double direct = std::log(2.0) * std::exp(-256.0 / 200.0) +
                          std::log(17.0) * std::exp(-289.0 / 200.0);
    CHECK(full == Catch::Approx(direct).epsilon(1e-10));
}

TEST_CASE("grid orthogonality picks out single coefficients") {
    const IntPolynomial sq = IntPolynomial::monomial(2);
    const long long n = 200, h = 20, m_g = 32768;
    const TruncationPlan plan = plan_truncation(sq, n, 1e-12);
    const DampedSeries s(sq, sq, n, plan, table());
    REQUIRE(m_g > 2 * s.max_abs_freq() + n + h);
    const cvec g = grid_eval(s, m_g);
    const RepSeries r = rep_convolve(sq, 2, n, h, table());
    for (long long t = n + 1; t <= n + h; ++t) {
        std::complex<double> acc{0.0, 0.0};
        for (long long m = 0; m < m_g; ++m)
            acc += cpow_int(g[std::size_t(m)], 2) * cis2pi(prodratio_mod1(-t, m, m_g));
        acc /= double(m_g);
        const double expect = std::exp(-double(t) / double(n)) * r.at(t);
        INFO("n=" << t);
        CHECK(std::abs(acc - std::complex<double>(expect, 0.0)) <= 1e-8 * std::max(1.0, expect));
    }
}

TEST_CASE("full circle rejects an undersized grid") {
    const IntPolynomial sq = IntPolynomial::monomial(2);
    const TruncationPlan plan = plan_truncation(sq, 200, 1e-12);
    try {
        full_circle_sum(sq, 2, 200, 20, plan, 1000, table());
        FAIL("expected precondition_error");
    } catch (const precondition_error& e) {
        CHECK(std::string(e.what()).find("exactness needs") != std::string::npos);
    }
}

TEST_CASE("damped power sum") {
    SECTION("one-term window") {
        const auto r = damped_power_sum(50, 1, 0.0);
        CHECK(r.exact == Catch::Approx(std::exp(-51.0 / 50.0)).epsilon(1e-14));
        CHECK(r.asymptotic == Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
        CHECK(std::abs(r.exact - r.asymptotic) <= 1.0 / 50.0); // H^2 N^{-1}, constant 1
    }
    SECTION("first-order accuracy across exponents") {
        for (double lambda : {0.0, 0.5, 1.0}) {
            const auto r = damped_power_sum(100000, 1000, lambda);
            const double allow = 3.0 * 1e6 * std::pow(1e5, lambda - 1.0);
            INFO("lambda=" << lambda << " gap=" << std::abs(r.exact - r.asymptotic));
            CHECK(std::abs(r.exact - r.asymptotic) <= allow);
        }
    }
    SECTION("empty window and domain") {
        const auto r = damped_power_sum(100, 0, 0.5);
        CHECK(r.exact == 0.0);
        CHECK(r.asymptotic == 0.0);
        CHECK_THROWS_AS(damped_power_sum(0, 0, 0.0), precondition_error);
        CHECK_THROWS_AS(damped_power_sum(100, 101, 0.0), precondition_error);
        CHECK_THROWS_AS(damped_power_sum(100, -1, 0.0), precondition_error);
    }
}
