#include <doctest.h>

#include "svasym/errors.hpp"
#include "svasym/schemes.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace svasym;

TEST_SUITE("schemes") {

TEST_CASE("philox known answers") {
    using C = Philox::Counter;
    CHECK(Philox::bijection({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox::bijection({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox::bijection({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("scheme names round trip") {
    for (SchemeKind k : kAllSchemes) CHECK(scheme_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(scheme_from_string("milstein"), ConfigError);
    CHECK(euler_asset(SchemeKind::EulerEuler));
    CHECK_FALSE(euler_asset(SchemeKind::LogEulerEuler));
    CHECK(euler_vol(SchemeKind::LogEulerEuler));
}

TEST_CASE("single steps") {
    ModelParams p;
    p.omega = 0.0;
    PathState st{1.5, 0.3, 0};
    PathState nx = step(SchemeKind::EulerLogEuler, st, {0.0, 0.0}, p);
    CHECK(nx.s == 1.5);
    CHECK(nx.sigma == 0.3);
    CHECK(nx.step_index == 1);

    p.tau = 0.01;
    p.omega = 1.0;  // omega sqrt(tau) = 0.1
    nx = step(SchemeKind::EulerEuler, {1.0, 1.0, 0}, {0.0, -1.0}, p);
    CHECK(nx.sigma == doctest::Approx(0.9).epsilon(1e-15));
    nx = step(SchemeKind::LogEulerLogEuler, {1.0, 1.0, 0}, {0.5, -1.0}, p);
    CHECK(nx.s == doctest::Approx(std::exp(0.05 - 0.005)).epsilon(1e-15));
    CHECK(nx.sigma == doctest::Approx(std::exp(-0.1 - 0.005)).epsilon(1e-15));
    // asset uses the pre-update sigma
    nx = step(SchemeKind::EulerLogEuler, {1.0, 2.0, 0}, {1.0, 3.0}, p);
    CHECK(nx.s == doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("correlation mixing") {
    const NoisePair raw{0.7, -1.3};
    CHECK(correlate(raw, 1.0).eps == raw.v);
    CHECK(correlate(raw, -1.0).eps == -raw.v);
    CHECK(correlate(raw, 0.0).eps == raw.eps);
    CHECK(correlate(raw, 0.6).eps == doctest::Approx(0.6 * -1.3 + 0.8 * 0.7));
}

TEST_CASE("noise stream determinism") {
    const NoisePair a = gaussian_pair(9, 3, 5), b = gaussian_pair(9, 3, 5);
    CHECK(a.eps == b.eps);
    CHECK(a.v == b.v);
    CHECK(gaussian_pair(9, 4, 5).eps != a.eps);
    GaussianPairStream s(9, 3);
    for (int k = 0; k < 5; ++k) s.next();
    CHECK(s.next().v == a.v);
    CHECK(s.position() == 6);
}

TEST_CASE("gaussian moments of the stream") {
    double m1 = 0, m2 = 0, cross = 0;
    const int N = 200000;
    for (int i = 0; i < N; ++i) {
        const NoisePair z = gaussian_pair(1, i, 0);
        m1 += z.eps;
        m2 += z.v * z.v;
        cross += z.eps * z.v;
    }
    CHECK(std::abs(m1 / N) < 4 / std::sqrt(N));
    CHECK(std::abs(m2 / N - 1) < 4 * std::sqrt(2.0 / N));
    CHECK(std::abs(cross / N) < 4 / std::sqrt(N));
}

TEST_CASE("constant volatility log-Euler is geometric Brownian motion") {
    ModelParams p{2.0, 0.3, 0.0, 0.25, 20, 0.0};
    const auto t = simulate_terminal(SchemeKind::LogEulerEuler, p, 40000, 7, 2);
    double s = 0, s2 = 0;
    for (const auto& x : t) {
        REQUIRE(x.log_abs.has_value());
        s += *x.log_abs;
        s2 += *x.log_abs * *x.log_abs;
    }
    const double N = t.size(), mean = s / N, se = std::sqrt((s2 / N - mean * mean) / N);
    const double rho = 0.3 * 0.5;
    CHECK(std::abs(mean - (std::log(2.0) - 0.5 * rho * rho * 20)) < 3 * se);
}

TEST_CASE("log-Euler volatility is exact and the log-Euler asset stays positive") {
    ModelParams p{1.0, 0.3, 0.8, 0.25, 25, 0.0};
    std::vector<PathState> traj;
    simulate_path(SchemeKind::LogEulerLogEuler, p, 4, 2, false, &traj);
    double w = 0;
    for (int k = 0; k <= p.n; ++k) {
        const double t = k * p.tau;
        CHECK(traj[k].sigma == doctest::Approx(0.3 * std::exp(p.omega * w - 0.5 * p.omega * p.omega * t)).epsilon(1e-12));
        CHECK(traj[k].s > 0);
        if (k < p.n) w += std::sqrt(p.tau) * gaussian_pair(4, 2, k).v;
    }
    for (const auto& x : simulate_terminal(SchemeKind::LogEulerEuler, {1.0, 0.5, 0.3, 0.25, 40, 0.3}, 2000, 1, 1))
        CHECK(x.s > 0);
}

TEST_CASE("terminal samples independent of workers") {
    ModelParams p{1.0, 0.2, 0.3, 0.25, 30, 0.5};
    const auto a = simulate_terminal(SchemeKind::EulerEuler, p, 1000, 3, 1);
    const auto b = simulate_terminal(SchemeKind::EulerEuler, p, 1000, 3, 7);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].s == b[i].s);
}

TEST_CASE("path dump") {
    ModelParams p{1.0, 0.2, 0.3, 0.25, 4, 0.0};
    const auto file = (std::filesystem::temp_directory_path() / "svasym_dump_test.csv").string();
    dump_path_csv(file, SchemeKind::EulerLogEuler, p, 1, 0);
    std::ifstream is(file);
    std::string line;
    int lines = 0;
    std::getline(is, line);
    CHECK(line == "step,s,sigma");
    while (std::getline(is, line)) ++lines;
    CHECK(lines == 5);
    std::filesystem::remove(file);
}

}
