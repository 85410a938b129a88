#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "polyrep/mangoldt.hpp"

using polyrep::MangoldtTable;
using polyrep::build_mangoldt;
using polyrep::cache_error;
using polyrep::load_cache;
using polyrep::precondition_error;
using polyrep::save_cache;

namespace {

// Independent oracle: trial division. Lambda(n) = log p iff n = p^t.
double lambda_oracle(long long n) {
    if (n < 2) return 0.0;
    long long d = 2;
    while (d * d <= n && n % d != 0) ++d;
    if (d * d > n) d = n; // prime
    long long m = n;
    while (m % d == 0) m /= d;
    return m == 1 ? std::log(double(d)) : 0.0;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("Lambda support and values up to 10") {
    const MangoldtTable t = build_mangoldt(10);
    const bool support[11] = {false, false, true, true, true, true,
                              false, true,  true, true, false};
    for (long long n = 0; n <= 10; ++n) {
        INFO("n=" << n);
        CHECK((t.lambda[std::size_t(n)] > 0.0) == support[n]);
    }
    CHECK(t.lambda[4] == t.lambda[2]); // identical double, not just close
    CHECK(t.lambda[8] == t.lambda[2]);
    CHECK(t.lambda[9] == t.lambda[3]);
    CHECK(t.lambda[2] == std::log(2.0));
    CHECK(t.lambda[9] == std::log(3.0));
}

TEST_CASE("chebyshev psi at small arguments") {
    const MangoldtTable t = build_mangoldt(100);
    CHECK(t.chebyshev_psi(1) == 0.0);
    CHECK(t.chebyshev_psi(2) == std::log(2.0));
    // psi(10) = 3 log 2 + 2 log 3 + log 5 + log 7, summed from the prime powers
    // 2,4,8 | 3,9 | 5 | 7 directly
    const double psi10 = 3 * std::log(2.0) + 2 * std::log(3.0) + std::log(5.0) + std::log(7.0);
    CHECK(t.chebyshev_psi(10) == Catch::Approx(psi10).epsilon(1e-12));
    CHECK(t.chebyshev_psi(10) == Catch::Approx(7.83201).margin(5e-6));

    double psi100 = 0.0;
    for (long long n = 2; n <= 100; ++n) psi100 += lambda_oracle(n);
    CHECK(t.chebyshev_psi(100) == Catch::Approx(psi100).epsilon(1e-9));

    CHECK_THROWS_AS(t.chebyshev_psi(0), precondition_error);
    CHECK_THROWS_AS(t.chebyshev_psi(101), precondition_error);
}

TEST_CASE("table agrees with the trial-division oracle") {
    const long long limit = 20000;
    const MangoldtTable t = build_mangoldt(limit);
    for (long long n = 1; n <= limit; ++n) {
        const double ref = lambda_oracle(n);
        INFO("n=" << n);
        REQUIRE(t.is_prime_power(n) == (ref > 0.0));
        REQUIRE(std::abs(t.lambda[std::size_t(n)] - ref) <= 1e-12);
    }
}

TEST_CASE("psi stays inside the prime-number-theorem band") {
    const long long limit = 100000;
    const MangoldtTable t = build_mangoldt(limit);
    for (long long x : {10000LL, 20000LL, 50000LL, 100000LL}) {
        const double r = t.chebyshev_psi(x) / double(x);
        INFO("x=" << x << " psi/x=" << r);
        CHECK(r > 0.8);
        CHECK(r < 1.2);
    }
    // prefix-sum consistency: psi(limit) is the running total of lambda
    double s = 0.0;
    for (long long n = 1; n <= limit; ++n) s += t.lambda[std::size_t(n)];
    CHECK(s == t.chebyshev_psi(limit));
}

TEST_CASE("prime powers share their prime's logarithm bit for bit") {
    const MangoldtTable t = build_mangoldt(3000);
    CHECK(t.lambda[1024] == t.lambda[2]);
    CHECK(t.lambda[2048] == t.lambda[2]);
    CHECK(t.lambda[81] == t.lambda[3]);
    CHECK(t.lambda[2187] == t.lambda[3]);
    CHECK(t.lambda[2401] == t.lambda[7]);
    CHECK(t.lambda[6] == 0.0);
    CHECK(t.lambda[1] == 0.0);
}

TEST_CASE("cache round-trip reproduces the table bitwise") {
    const std::string path = temp_path("polyrep_cache_rt.bin");
    const MangoldtTable a = build_mangoldt(50000);
    save_cache(a, path);
    const MangoldtTable b = load_cache(path);
    REQUIRE(b.limit == a.limit);
    REQUIRE(b.spf == a.spf);
    REQUIRE(b.lambda.size() == a.lambda.size());
    CHECK(std::memcmp(b.lambda.data(), a.lambda.data(), a.lambda.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(b.psi.data(), a.psi.data(), a.psi.size() * sizeof(double)) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("cache loader distinguishes the failure kinds") {
    const std::string path = temp_path("polyrep_cache_bad.bin");
    const MangoldtTable t = build_mangoldt(500);
    save_cache(t, path);
    const auto size = std::filesystem::file_size(path);

    SECTION("missing file") {
        try {
            load_cache(temp_path("polyrep_no_such_cache.bin"));
            FAIL("expected cache_error");
        } catch (const cache_error& e) {
            CHECK(e.what_kind() == cache_error::kind::io);
        }
    }
    SECTION("bad magic") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.put('X');
        f.close();
        try {
            load_cache(path);
            FAIL("expected cache_error");
        } catch (const cache_error& e) {
            CHECK(e.what_kind() == cache_error::kind::magic);
        }
    }
    SECTION("unsupported version") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4);
        f.put(char(99));
        f.close();
        try {
            load_cache(path);
            FAIL("expected cache_error");
        } catch (const cache_error& e) {
            CHECK(e.what_kind() == cache_error::kind::version);
        }
    }
    SECTION("truncated payload") {
        std::filesystem::resize_file(path, size - 7);
        try {
            load_cache(path);
            FAIL("expected cache_error");
        } catch (const cache_error& e) {
            CHECK(e.what_kind() == cache_error::kind::checksum);
        }
    }
    SECTION("flipped payload byte") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekg(40);
        const int c = f.get();
        f.seekp(40);
        f.put(char(c ^ 0x5A));
        f.close();
        try {
            load_cache(path);
            FAIL("expected cache_error");
        } catch (const cache_error& e) {
            CHECK(e.what_kind() == cache_error::kind::checksum);
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("build rejects out-of-range limits") {
    CHECK_THROWS_AS(build_mangoldt(0), precondition_error);
    CHECK_THROWS_AS(build_mangoldt(-5), precondition_error);
    CHECK_THROWS_AS(build_mangoldt(0x100000000LL), precondition_error);
    const MangoldtTable t = build_mangoldt(1);
    CHECK(t.limit == 1);
    CHECK(t.chebyshev_psi(1) == 0.0);
}
