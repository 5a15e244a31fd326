#include "svasym/limit_laws.hpp"

#include "svasym/errors.hpp"
#include "svasym/numerics.hpp"

#include <array>
#include <cmath>
#include <string>

namespace svasym::limits {

namespace {

const numerics::QuadratureSpec kQuad{1e-13, 1e-12, 60};

void check_rho(double rho) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("rho must be nonnegative");
}

}  // namespace

double lln_euler(double rho) {
    check_rho(rho);
    if (rho == 0.0) return 0.0;
    const auto g = [rho](double e) { return std::log(std::abs(1.0 + rho * e)); };
    const auto near = [rho](double, double off) { return std::log(rho * std::abs(off)); };
    const double s[1] = {-1.0 / rho};
    return numerics::gaussian_expectation(g, kQuad, s, near);
}

double lln_root() {
    const auto roots = numerics::find_roots(lln_euler, 1.0, 2.0, 16);
    if (roots.size() != 1) throw NonConvergent("lln_root: expected one root on [1, 2]");
    return roots.front();
}

double log_abs_variance(double rho) {
    check_rho(rho);
    if (rho == 0.0) return 0.0;
    const double m = lln_euler(rho);
    const auto g = [rho, m](double e) {
        const double l = std::log(std::abs(1.0 + rho * e)) - m;
        return l * l;
    };
    const auto near = [rho, m](double, double off) {
        const double l = std::log(rho * std::abs(off)) - m;
        return l * l;
    };
    const double s[1] = {-1.0 / rho};
    return numerics::gaussian_expectation(g, kQuad, s, near);
}

double abs_variance(double rho) {
    check_rho(rho);
    if (rho == 0.0) return 0.0;
    const auto g = [rho](double e) { return std::abs(1.0 + rho * e); };
    const auto near = [rho](double, double off) { return rho * std::abs(off); };
    const double s[1] = {-1.0 / rho};
    const double m = numerics::gaussian_expectation(g, kQuad, s, near);
    return 1.0 + rho * rho - m * m;
}

double shift_response(double rho, double x) {
    check_rho(rho);
    if (x == 0.0) return 0.0;
    // log|1 + eps x/(1 + rho eps)| = log|1 + (rho + x) eps| - log|1 + rho eps|.
    const double r1 = rho + x;
    const auto g = [rho, r1](double e) { return std::log(std::abs(1.0 + r1 * e)) - std::log(std::abs(1.0 + rho * e)); };
    const double s1 = -1.0 / r1;
    const double s0 = rho > 0.0 ? -1.0 / rho : 0.0;
    // Near one singular point that factor is rho_k |offset|; the other is regular there.
    const auto near = [=](double s, double off) {
        if (s == s1) return std::log(r1 * std::abs(off)) - std::log(std::abs(1.0 + rho * (s + off)));
        return std::log(std::abs(1.0 + r1 * (s + off))) - std::log(rho * std::abs(off));
    };
    std::array<double, 2> sing{s1, s0};
    return numerics::gaussian_expectation(g, kQuad, std::span<const double>(sing.data(), rho > 0.0 ? 2 : 1), near);
}

double shift_slope(double rho) {
    const auto central = [rho](double h) { return (shift_response(rho, h) - shift_response(rho, -h)) / (2.0 * h); };
    const double fine = central(1e-4);
    const double coarse = central(2e-4);
    if (std::abs(fine - coarse) > 1e-4 * std::max(std::abs(fine), 1e-12))
        throw NonConvergent("shift_slope: step-halving check failed at rho=" + std::to_string(rho));
    return fine;
}

double clt_variance_euler(double rho, double beta, bool abs_variant) {
    if (!(rho > 0.0)) throw DomainError("clt_variance_euler: rho must be positive");
    if (!(beta >= 0.0)) throw DomainError("clt_variance_euler: beta must be nonnegative");
    const double v = abs_variant ? abs_variance(rho) : log_abs_variance(rho);
    if (beta == 0.0) return v;
    const double hp = shift_slope(rho);
    return 2.0 / 3.0 * hp * hp * rho * rho * beta + v;
}

double clt_variance_lognormal(double rho, double beta) {
    if (!(rho >= 0.0) || !(beta >= 0.0)) throw DomainError("clt_variance_lognormal: inputs must be nonnegative");
    const double r2 = rho * rho;
    return r2 + 2.0 / 3.0 * r2 * r2 * beta;
}

double lln_lognormal(double rho) { return -0.5 * rho * rho; }

LimitConstants constants(Family fam, double rho, double beta, bool abs_variant) {
    if (fam == Family::EulerAsset) return {lln_euler(rho), clt_variance_euler(rho, beta, abs_variant), fam};
    return {lln_lognormal(rho), clt_variance_lognormal(rho, beta), fam};
}

csv::Table lln_curve(const std::vector<double>& rhos) {
    csv::Table t({"rho", "lln"});
    for (double r : rhos) t.add({csv::num(r), csv::num(lln_euler(r))});
    return t;
}

}  // namespace svasym::limits
