#include <doctest.h>

#include "svasym/errors.hpp"
#include "svasym/numerics.hpp"
#include "svasym/rate_functions.hpp"

#include <cmath>

using namespace svasym;

namespace {

double fact(int k) { return std::tgamma(k + 1.0); }

double dfact(int k) {
    double r = 1;
    for (int i = k; i > 1; i -= 2) r *= i;
    return r;
}

// log E[(1 + eps e^theta)^q] summed term by term.
double cgf_direct(int q, double theta) {
    double s = 0;
    for (int j = 0; 2 * j <= q; ++j) s += fact(q) / (fact(2 * j) * fact(q - 2 * j)) * dfact(2 * j - 1) * std::exp(2 * j * theta);
    return std::log(s);
}

// sup_theta (x theta - f(theta)) on a wide bracket.
double legendre_oracle(int q, double x) {
    auto g = [&](double t) { return x * t - cgf_direct(q, t); };
    return numerics::golden_section_max(g, -40, 40, 1e-12).max;
}

}  // namespace

TEST_SUITE("rate_functions") {

TEST_CASE("normalizer") {
    CHECK(rate::normalizer(2) == 2);
    CHECK(rate::normalizer(4) == 10);
    CHECK(rate::normalizer(5) == 26);
    CHECK(rate::normalizer_exact(20) == 23758664096ull);
    CHECK_THROWS_AS(rate::normalizer_exact(21), Overflow);
    for (int q = 0; q <= 12; ++q) CHECK(rate::normalizer(q) == doctest::Approx(std::exp(cgf_direct(q, 0))).epsilon(1e-13));
}

TEST_CASE("cumulant generating function") {
    CHECK(rate::cgf(2, std::log(0.1)) == doctest::Approx(std::log(1.01)).epsilon(1e-14));
    CHECK(rate::cgf(3, 0) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(rate::cgf(4, -40) < 1e-30);
    for (int q = 1; q <= 9; ++q)
        for (double t : {-3.0, -0.5, 0.0, 1.2, 4.0}) CHECK(rate::cgf(q, t) == doctest::Approx(cgf_direct(q, t)).epsilon(1e-13));
}

TEST_CASE("derivatives") {
    CHECK(rate::cgf_deriv(2, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rate::cgf_deriv(3, 0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(rate::cgf_deriv(4, 30) == doctest::Approx(4.0).epsilon(1e-12));
    const double h = 1e-5;
    for (int q : {2, 3, 6})
        for (double t : {-2.0, 0.3, 1.5}) {
            CHECK(rate::cgf_deriv(q, t) == doctest::Approx((cgf_direct(q, t + h) - cgf_direct(q, t - h)) / (2 * h)).epsilon(1e-8));
            CHECK(rate::cgf_deriv2(q, t) ==
                  doctest::Approx((rate::cgf_deriv(q, t + h) - rate::cgf_deriv(q, t - h)) / (2 * h)).epsilon(1e-7));
            CHECK(rate::cgf_deriv3(q, t) ==
                  doctest::Approx((rate::cgf_deriv2(q, t + h) - rate::cgf_deriv2(q, t - h)) / (2 * h)).epsilon(1e-6));
        }
}

TEST_CASE("differences without cancellation") {
    for (int q : {2, 3, 5})
        for (double a : {-3.0, 0.0, 2.0})
            for (double s : {1e-9, 1e-3, 0.5, 3.0}) {
                const double want = cgf_direct(q, a) - cgf_direct(q, a - s);
                CHECK(rate::cgf_drop(q, a, s) == doctest::Approx(want).epsilon(s < 1e-6 ? 1e-6 : 1e-11));
                const double dd = rate::cgf_deriv(q, a) - rate::cgf_deriv(q, a - s);
                CHECK(rate::cgf_deriv_drop(q, a, s) == doctest::Approx(dd).epsilon(s < 1e-6 ? 1e-5 : 1e-10));
            }
    // small-s slope f'(a) s
    CHECK(rate::cgf_drop(2, 0.0, 1e-12) == doctest::Approx(1e-12).epsilon(1e-9));
}

TEST_CASE("monotone and positive") {
    for (int q = 2; q <= 7; ++q) {
        double prev = 0;
        for (double t = -10; t <= 5; t += 0.25) {
            const double v = rate::cgf(q, t);
            CHECK(v >= 0);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("inverses") {
    for (int q : {2, 3, 5}) {
        for (double y : {1e-6, 0.3, 5.0}) CHECK(rate::cgf(q, rate::cgf_inverse(q, y)) == doctest::Approx(y).epsilon(1e-11));
        for (double x : {0.01, 0.9, 1.9}) CHECK(rate::cgf_deriv(q, rate::tilt_for_mean(q, x)) == doctest::Approx(x).epsilon(1e-11));
    }
}

TEST_CASE("rate function") {
    CHECK(rate::rate(2, 1.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    CHECK(rate::rate(2, 0.0) == doctest::Approx(0.0));
    CHECK(rate::rate(2, 2.0) == doctest::Approx(0.0));
    for (int q = 2; q <= 5; ++q)
        for (double x = 0.05; x < 2 * (q / 2); x += 0.15) {
            CHECK(rate::rate_closed_form(q, x) == doctest::Approx(legendre_oracle(q, x)).epsilon(1e-9));
            CHECK(rate::rate_numeric(q, x) == doctest::Approx(rate::rate_closed_form(q, x)).epsilon(1e-9));
        }
    CHECK(rate::rate_closed_form(4, 1.7) == doctest::Approx(rate::rate_numeric(4, 1.7)).epsilon(1e-9));
    for (double x : {0.4, 2.2, 5.1}) CHECK(rate::rate(7, x) == doctest::Approx(legendre_oracle(7, x)).epsilon(1e-9));
    // endpoint limits -log c_0 and -log c_K
    CHECK(std::abs(rate::rate(4, 0.0)) < 1e-14);
    CHECK(rate::rate(4, 4.0) == doctest::Approx(-std::log(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(rate::rate_closed_form(6, 1.0), DomainError);
    CHECK_THROWS_AS(rate::rate(2, 2.5), DomainError);
}

}
