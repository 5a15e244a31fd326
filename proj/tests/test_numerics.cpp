#include <doctest.h>

#include "svasym/errors.hpp"
#include "svasym/numerics.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace svasym;
using namespace svasym::numerics;

TEST_SUITE("numerics") {

TEST_CASE("adaptive quadrature") {
    CHECK(integrate_adaptive([](double x) { return x * x; }, 0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    // 1/sqrt(x) after x = t^2
    CHECK(integrate_adaptive([](double) { return 2.0; }, 0, 1) == doctest::Approx(2.0).epsilon(1e-14));

    auto g = [](double y) { return y * y / (1.01 - std::exp(-(1 - y * y))); };
    const double whole = integrate_adaptive(g, 0, 1, {1e-12, 1e-12, 60});
    const double split = integrate_adaptive(g, 0.5, 1, {1e-12, 1e-12, 60}) + integrate_adaptive(g, 0, 0.5, {1e-12, 1e-12, 60});
    CHECK(std::abs(whole - split) < 1e-9);
}

TEST_CASE("quadrature spec validation") {
    CHECK_THROWS_AS((QuadratureSpec{-1.0, 1e-9, 60}.validate()), DomainError);
    CHECK_THROWS_AS((QuadratureSpec{1e-10, 1e-9, 0}.validate()), DomainError);
}

TEST_CASE("gaussian expectations") {
    CHECK(std::abs(gaussian_expectation([](double x) { return x; })) < 1e-12);
    CHECK(gaussian_expectation([](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(gaussian_expectation([](double x) { return x * x * x * x; }) == doctest::Approx(3.0).epsilon(1e-10));

    auto g = [](double x) { return std::log(std::abs(1.0 + 0.5 * x)); };
    const double quad = gaussian_expectation(g, {}, -2.0);
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> nd;
    const int N = 10'000'000;
    double s = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
        const double v = g(nd(rng));
        s += v;
        s2 += v * v;
    }
    const double mean = s / N;
    const double se = std::sqrt((s2 / N - mean * mean) / N);
    CHECK(std::abs(quad - mean) < 3 * se);
}

TEST_CASE("root finding") {
    auto r = find_roots([](double x) { return x * x - 1; }, 0, 2, 32);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-11));

    r = find_roots([](double x) { return std::sin(x); }, 1, 7, 64);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(std::numbers::pi).epsilon(1e-11));
    CHECK(r[1] == doctest::Approx(2 * std::numbers::pi).epsilon(1e-11));

    r = find_roots([](double x) { return (x - 0.3) * (x - 0.6) * (x - 0.9); }, 0, 1, 128);
    REQUIRE(r.size() == 3);
    CHECK(r[1] == doctest::Approx(0.6).epsilon(1e-10));

    const double b = bisect([](double x) { return x * x * x - 2; }, {1, 2, -1, 6});
    CHECK(b == doctest::Approx(std::cbrt(2.0)).epsilon(1e-11));
}

TEST_CASE("maximization") {
    Extremum e = maximize_scan_refine([](double x) { return -(x - 0.5) * (x - 0.5); }, 0, 1, 64);
    CHECK(e.argmax == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(e.max) < 1e-14);
    e = maximize_scan_refine([](double x) { return x; }, 0, 1, 64);
    CHECK(e.argmax == 1.0);
    CHECK(e.max == 1.0);
    e = maximize_scan_refine([](double x) { return x * x * x - x; }, 0, 2, 64);
    CHECK(e.argmax == 2.0);
    CHECK(e.max == doctest::Approx(6.0));
    e = golden_section_max([](double x) { return std::cos(x); }, -1, 2);
    CHECK(std::abs(e.argmax) < 1e-6);
}

TEST_CASE("compensated sum is order insensitive") {
    std::vector<double> v;
    for (int i = 0; i < 1000; ++i) v.push_back((i % 2 ? 1e16 : 1.0) * (i % 4 < 2 ? 1 : -1));
    CompensatedSum a, b;
    for (double x : v) a.add(x);
    for (auto it = v.rbegin(); it != v.rend(); ++it) b.add(*it);
    CHECK(a.value() == b.value());
    CHECK(normal_pdf(0) == doctest::Approx(1 / std::sqrt(2 * std::numbers::pi)));
}

}
