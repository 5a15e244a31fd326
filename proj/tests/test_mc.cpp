#include <doctest.h>

#include "svasym/errors.hpp"
#include "svasym/exact_moments.hpp"
#include "svasym/limit_laws.hpp"
#include "svasym/mc_engine.hpp"

#include <cmath>
#include <tuple>

using namespace svasym;

namespace {

ModelParams market(double rho, double beta, int n) { return market_from_scaling({rho, beta, 2.0}, n, 0.25); }

bool same(const mc::Estimate& a, const mc::Estimate& b) {
    return a.mean == b.mean && a.std_error == b.std_error && a.n_eff == b.n_eff && a.log_space == b.log_space;
}

}  // namespace

TEST_SUITE("mc_engine") {

TEST_CASE("martingale for every scheme and correlation") {
    for (SchemeKind k : kAllSchemes)
        for (double corr : {-1.0, 0.0, 1.0}) {
            ModelParams p = market(0.1, 0.5, 20);
            p.corr = corr;
            const mc::Estimate e = mc::estimate_moment(k, 1, p, {20000, 5, 2, false});
            CHECK(std::abs(e.mean - 1.0) < 3 * e.std_error);
        }
}

TEST_CASE("second moment against the exact recursion") {
    const ModelParams p = market(0.1, 0.1, 10);
    const mc::Estimate e = mc::estimate_moment(SchemeKind::EulerLogEuler, 2, p, {50000, 3, 2, false});
    CHECK(std::abs(e.mean - std::exp(exact::moment_dp(2, p).log_moment)) < 3 * e.std_error);
    ModelParams c = market(0.2, 0.0, 15);
    c.S0 = 1.2;
    const mc::Estimate g = mc::estimate_moment(SchemeKind::EulerEuler, 2, c, {50000, 4, 2, false});
    CHECK(std::abs(g.mean - 1.44 * std::pow(1.04, 15)) < 3 * g.std_error);
}

TEST_CASE("exact moments within Monte Carlo error") {
    for (int q : {2, 3})
        for (auto [rho, beta, n] : {std::tuple{0.1, 0.5, 10}, {0.15, 0.3, 20}, {0.2, 0.2, 5}}) {
            const ModelParams p = market(rho, beta, n);
            const mc::Estimate e = mc::estimate_moment(SchemeKind::EulerLogEuler, q, p, {40000, 21, 2, false});
            INFO(q, " ", rho, " ", beta, " ", n, " ", e.mean, " ", std::exp(exact::moment_dp(q, p).log_moment), " ", e.std_error);
            CHECK(std::abs(e.mean - std::exp(exact::moment_dp(q, p).log_moment)) < 3.5 * e.std_error);
        }
}

TEST_CASE("martingale at intermediate correlations") {
    for (SchemeKind k : kAllSchemes)
        for (double corr : {-0.5, 0.5}) {
            ModelParams p = market(0.2, 0.5, 20);
            p.corr = corr;
            const mc::Estimate e = mc::estimate_moment(k, 1, p, {20000, 6, 2, false});
            CHECK(std::abs(e.mean - 1.0) < 3 * e.std_error);
        }
}

TEST_CASE("growth rates") {
    const mc::Estimate ln = mc::estimate_lln(SchemeKind::LogEulerLogEuler, market(0.3, 1.0, 2000), {2000, 1, 2, false});
    CHECK(std::abs(ln.mean + 0.045) < 3 * ln.std_error);
    const ModelParams p = market(0.5, 1.0, 500);
    const mc::Estimate a = mc::estimate_lln(SchemeKind::EulerLogEuler, p, {4000, 2, 2, false});
    const mc::Estimate b = mc::estimate_lln(SchemeKind::EulerEuler, p, {4000, 3, 2, false});
    CHECK(std::abs(a.mean - limits::lln_euler(0.5)) < 3 * a.std_error);
    CHECK(std::abs(a.mean - b.mean) < 3 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("fluctuation variance") {
    const ModelParams p = market(0.1, 1.0, 500);
    const mc::Estimate e = mc::estimate_clt_variance(SchemeKind::LogEulerLogEuler, p, {10000, 8, 2, false}, -0.005);
    CHECK(e.std_error > 0);
    CHECK(std::abs(e.mean - limits::clt_variance_lognormal(0.1, 1.0)) < 3.5 * e.std_error);
    const ModelParams g = market(0.1, 0.0, 500);
    const mc::Estimate z = mc::estimate_clt_variance(SchemeKind::LogEulerLogEuler, g, {10000, 9, 2, false}, -0.005);
    CHECK(std::abs(z.mean - 0.01) < 3.5 * z.std_error);
}

TEST_CASE("bit-identical across worker counts") {
    const ModelParams p = market(0.2, 1.0, 30);
    for (bool anti : {false, true}) {
        const mc::Estimate a = mc::estimate_moment(SchemeKind::EulerLogEuler, 2, p, {9999, 17, 1, anti});
        for (int w : {4, 16}) CHECK(same(a, mc::estimate_moment(SchemeKind::EulerLogEuler, 2, p, {9999, 17, w, anti})));
        const mc::Estimate c = mc::estimate_clt_variance(SchemeKind::EulerEuler, p, {9999, 17, 1, anti}, 0.0);
        CHECK(same(c, mc::estimate_clt_variance(SchemeKind::EulerEuler, p, {9999, 17, 16, anti}, 0.0)));
    }
}

TEST_CASE("antithetic pairing") {
    const ModelParams p = market(0.2, 0.3, 20);
    const mc::Estimate plain = mc::estimate_moment(SchemeKind::LogEulerLogEuler, 1, p, {40000, 1, 2, false});
    const mc::Estimate anti = mc::estimate_moment(SchemeKind::LogEulerLogEuler, 1, p, {40000, 1, 2, true});
    CHECK(std::abs(plain.mean - anti.mean) < 4 * std::hypot(plain.std_error, anti.std_error));
    CHECK(anti.std_error <= plain.std_error);
}

TEST_CASE("standard error scaling") {
    const ModelParams p = market(0.2, 0.3, 20);
    const mc::Estimate a = mc::estimate_lln(SchemeKind::EulerLogEuler, p, {10000, 2, 2, false});
    const mc::Estimate b = mc::estimate_lln(SchemeKind::EulerLogEuler, p, {40000, 2, 2, false});
    CHECK(std::abs(a.std_error / b.std_error / 2 - 1) < 0.2);
}

TEST_CASE("log space and tail warning") {
    // |1 + 10 eps| per step: q log|S_n| far beyond the double range
    const ModelParams p{1.0, 10.0, 0.0, 1.0, 120, 0.0};
    const mc::Estimate e = mc::estimate_moment(SchemeKind::EulerEuler, 4, p, {2000, 1, 2, false});
    CHECK(e.log_space);
    CHECK(e.tail_warning);
    CHECK(std::isfinite(e.mean));
    CHECK(e.mean > 690);
}

TEST_CASE("config validation and table") {
    CHECK_THROWS_AS((mc::McConfig{1, 1, 1, false}.validate()), DomainError);
    CHECK_THROWS_AS((mc::McConfig{10, 1, 0, false}.validate()), DomainError);
    CHECK_THROWS_AS(mc::estimate_moment(SchemeKind::EulerEuler, 1.5, market(0.1, 0.1, 5), {100, 1, 1, false}), DomainError);
    mc::EstimateTable t;
    t.add("lln", {-0.5, 0.01, 100, false, false, 0}, {100, 7, 1, false});
    CHECK(t.table().str() == "estimator,value,std_error,n_paths,seed\nlln,-0.5,0.01,100,7\n");
}

}
