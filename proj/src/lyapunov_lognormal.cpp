#include "svasym/lyapunov_lognormal.hpp"

#include "svasym/errors.hpp"
#include "svasym/numerics.hpp"

#include <cmath>
#include <numbers>

namespace svasym::lognormal {

XiSolution solve_xi(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("solve_xi: a and b must be positive");
    const double k = a * b * b;
    // 2 xi^2 rises from 0, k cos^2 xi falls to 0: one sign change on (0, pi/2).
    const auto h = [k](double x) {
        const double c = std::cos(x);
        return 2.0 * x * x - k * c * c;
    };
    double lo = 0.0, hi = std::numbers::pi / 2;
    for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (h(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), a, b};
}

double lambda_ab(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("lambda_ab: a and b must be nonnegative");
    if (a == 0.0) return 0.0;
    if (b == 0.0) return -a;
    const double xi = solve_xi(a, b).xi;
    const double c = std::cos(xi);
    return a * (c * c - std::sin(2.0 * xi) / xi);
}

LnExponent lyapunov_ln(double rho, double beta, double q) {
    if (!(rho > 0.0)) throw DomainError("lyapunov_ln: rho must be positive");
    if (!(beta >= 0.0)) throw DomainError("lyapunov_ln: beta must be nonnegative");
    // constant volatility: geometric Brownian motion, finite for every q
    if (beta == 0.0) return {false, 0.5 * rho * rho * q * (q - 1.0)};
    if (q < 0.0 || q > 1.0) return {true, 0.0};
    if (q == 0.0 || q == 1.0) return {false, 0.0};
    return {false, lambda_ab(0.5 * rho * rho * q * (1.0 - q), 2.0 * std::sqrt(2.0 * beta))};
}

double optimal_profile(double a, double b, double x) {
    const double xi = solve_xi(a, b).xi;
    const double c0 = std::cos(xi);
    const double cx = std::cos(xi * (x - 1.0));
    return std::log((c0 * c0) / (cx * cx)) / b;
}

double profile_functional(double a, double b) {
    const double xi = solve_xi(a, b).xi;
    const auto integrand = [&](double x) {
        const double c0 = std::cos(xi);
        const double cx = std::cos(xi * (x - 1.0));
        const double g = std::log((c0 * c0) / (cx * cx)) / b;
        const double gp = 2.0 * xi / b * std::tan(xi * (x - 1.0));
        return -a * std::exp(b * g) - 0.5 * gp * gp;
    };
    return numerics::integrate_adaptive(integrand, 0.0, 1.0, {1e-13, 1e-12, 60});
}

csv::Table lambda_grid(const std::vector<double>& as, const std::vector<double>& bs) {
    csv::Table t({"a", "b", "lambda"});
    for (double a : as)
        for (double b : bs) t.add({csv::num(a), csv::num(b), csv::num(lambda_ab(a, b))});
    return t;
}

}  // namespace svasym::lognormal
