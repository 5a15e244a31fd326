#include "svasym/lyapunov_euler.hpp"

#include "svasym/errors.hpp"
#include "svasym/numerics.hpp"
#include "svasym/parallel.hpp"
#include "svasym/rate_functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>

namespace svasym::euler {

using numerics::QuadratureSpec;

namespace {

const QuadratureSpec kQuad{1e-12, 1e-11, 60};

int half_of(int q) { return q / 2; }

void check_q(int q) {
    if (q < 2) throw DomainError("Euler Lyapunov exponent: q must be an integer >= 2");
}

void check_rho_beta(double rho, double beta) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be nonnegative");
}

// dF/du along a = log rho + u^2.
double F_du(int q, double u, double rho) {
    if (u == 0.0) return 2.0 / std::sqrt(rate::cgf_deriv(q, std::log(rho)));
    return 2.0 * u * F_q_deriv(q, std::log(rho) + u * u, rho);
}

// One-parameter family of candidate maximizers. `level` rises from zero at
// x_lo; value(x, beta) increases in x while level(x) < target(beta) and
// decreases once it is above, so upward crossings are local maxima.
struct Landscape {
    std::function<double(double)> level;
    std::function<double(double)> slope;
    std::function<double(double, double)> value;
    std::function<double(double)> target;   // beta -> level
    std::function<double(double)> beta_of;  // level -> beta
    double x_lo = 0.0;
    double x_hi = 1.0;
};

struct Dip {
    bool present = false;
    double x_infl = 0.0;     // steepest descent (or flattest ascent) of level
    double slope_infl = 0.0;
    double x_max = 0.0, x_min = 0.0;
    double g_max = 0.0, g_min = 0.0;
};

Dip find_dip(const Landscape& L, int grid = 400) {
    Dip d;
    const auto neg = [&](double x) { return -L.slope(x); };
    const numerics::Extremum e = numerics::maximize_scan_refine(neg, L.x_lo, L.x_hi, grid);
    d.x_infl = e.argmax;
    d.slope_infl = -e.max;
    if (d.slope_infl >= 0.0) return d;
    d.present = true;
    const numerics::ScalarFn s = L.slope;
    d.x_max = numerics::bisect(s, {L.x_lo, d.x_infl, s(L.x_lo), d.slope_infl}, 1e-12);
    double hi = L.x_hi;
    double s_hi = s(hi);
    for (int k = 0; k < 20 && !(s_hi > 0.0); ++k) {
        hi = d.x_infl + 2.0 * (hi - d.x_infl);
        s_hi = s(hi);
    }
    if (!(s_hi > 0.0)) throw NonConvergent("transition search: level never turns upward again");
    d.x_min = numerics::bisect(s, {d.x_infl, hi, d.slope_infl, s_hi}, 1e-12);
    d.g_max = L.level(d.x_max);
    d.g_min = L.level(d.x_min);
    return d;
}

double solve_level(const Landscape& L, double g, double lo, double hi) {
    const auto h = [&](double x) { return L.level(x) - g; };
    double h_lo = h(lo);
    double h_hi = h(hi);
    for (int k = 0; k < 60 && h_hi < 0.0; ++k) {
        const double w = hi - lo;
        lo = hi;
        h_lo = h_hi;
        hi = lo + 2.0 * w;
        h_hi = h(hi);
    }
    if (h_lo == 0.0) return lo;
    if (h_hi == 0.0) return hi;
    if (h_lo > 0.0 || h_hi < 0.0) throw NonConvergent("transition search: level crossing not bracketed");
    return numerics::bisect(h, {lo, hi, h_lo, h_hi}, 1e-13);
}

double crossing_beta(const Landscape& L, const Dip& d) {
    const auto gap = [&](double beta) {
        const double g = L.target(beta);
        const double low = solve_level(L, g, L.x_lo, d.x_max);
        const double high = solve_level(L, g, d.x_min, d.x_min + 1.0);
        return L.value(high, beta) - L.value(low, beta);
    };
    double b_lo = L.beta_of(d.g_min);
    double b_hi = L.beta_of(d.g_max);
    double f_lo = gap(b_lo);
    double f_hi = gap(b_hi);
    if (f_lo == 0.0) return b_lo;
    if (f_hi == 0.0) return b_hi;
    if (!(f_lo < 0.0 && f_hi > 0.0)) throw NonConvergent("transition search: branch values do not cross");
    return numerics::bisect(gap, {b_lo, b_hi, f_lo, f_hi}, 1e-10 * std::max(1.0, b_hi));
}

// Exact problem in u = sqrt(h1 - log rho).
Landscape exact_landscape(int q, double rho) {
    const double lr = std::log(rho);
    Landscape L;
    L.level = [=](double u) { return F_q(q, lr + u * u, rho); };
    L.slope = [=](double u) { return F_du(q, u, rho); };
    L.value = [=](double u, double beta) { return lambda_from_h1(lr + u * u, rho, beta, q); };
    L.target = [](double beta) { return 2.0 * std::sqrt(beta); };
    L.beta_of = [](double g) { return 0.25 * g * g; };
    L.x_lo = 0.0;
    L.x_hi = std::sqrt(std::max(8.0, lr + 8.0) - lr);
    return L;
}

// Constant-profile problem in x = theta - log rho, where a = f'(theta).
Landscape meanfield_landscape(int q, double rho) {
    const double lr = std::log(rho);
    Landscape L;
    L.level = [=](double x) { return 1.5 * x / rate::cgf_deriv(q, lr + x); };
    L.slope = [=](double x) {
        const double fp = rate::cgf_deriv(q, lr + x);
        const double fpp = rate::cgf_deriv2(q, lr + x);
        return 1.5 / fp - 1.5 * x * fpp / (fp * fp);
    };
    L.value = [=](double x, double beta) {
        const double th = lr + x;
        const double a = rate::cgf_deriv(q, th);
        return a * lr + beta * a * a / 3.0 - (th * a - rate::cgf(q, th));
    };
    L.target = [](double beta) { return beta; };
    L.beta_of = [](double g) { return g; };
    L.x_lo = 0.0;
    L.x_hi = std::max(8.0, 8.0 - lr);
    return L;
}

// Dip of F_q per (q, rho); independent of beta, so cached.
const Dip& cached_dip(int q, double rho) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, Dip> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({q, rho});
        if (it != cache.end()) return it->second;
    }
    const Dip d = find_dip(exact_landscape(q, rho));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(std::make_pair(q, rho), d).first->second;
}

}  // namespace

std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::BoundaryZero: return "boundary-zero";
        case Branch::Stationary: return "stationary";
        case Branch::BoundaryTop: return "boundary-top";
        case Branch::LowerBoundFloor: return "lower-bound-floor";
    }
    return "unknown";
}

double F_q(int q, double a, double rho) {
    check_q(q);
    const double lr = std::log(rho);
    if (a < lr) throw DomainError("F_q: a must be at least log rho");
    if (a == lr) return 0.0;
    const double T = std::sqrt(a - lr);
    const double fp = rate::cgf_deriv(q, a);
    const auto g = [&](double t) {
        if (t == 0.0) return 2.0 / std::sqrt(fp);
        return 2.0 * t / std::sqrt(rate::cgf_drop(q, a, t * t));
    };
    return numerics::integrate_adaptive(g, 0.0, T, kQuad);
}

double F_q_deriv(int q, double a, double rho) {
    check_q(q);
    const double lr = std::log(rho);
    if (!(a > lr)) throw DomainError("F_q_deriv: a must exceed log rho");
    const double T = std::sqrt(a - lr);
    const double fp = rate::cgf_deriv(q, a);
    const double fpp = rate::cgf_deriv2(q, a);
    const auto g = [&](double t) {
        if (t == 0.0) return fpp / (fp * std::sqrt(fp));
        const double s = t * t;
        const double D = rate::cgf_drop(q, a, s);
        return t * rate::cgf_deriv_drop(q, a, s) / (D * std::sqrt(D));
    };
    return 1.0 / std::sqrt(rate::cgf_drop(q, a, a - lr)) - numerics::integrate_adaptive(g, 0.0, T, kQuad);
}

double lambda_from_h1(double h1, double rho, double beta, int q) {
    check_q(q);
    check_rho_beta(rho, beta);
    const double lr = std::log(rho);
    if (h1 < lr) throw DomainError("lambda_from_h1: h1 must be at least log rho");
    if (h1 == lr) return rate::cgf(q, lr);
    if (beta == 0.0) throw DomainError("lambda_from_h1: beta must be positive away from h1 = log rho");
    const double T = std::sqrt(h1 - lr);
    const auto g = [&](double t) { return t == 0.0 ? 0.0 : 2.0 * t * std::sqrt(rate::cgf_drop(q, h1, t * t)); };
    return rate::cgf(q, h1) - numerics::integrate_adaptive(g, 0.0, T, kQuad) / std::sqrt(beta);
}

double lambda_d(int q, double d, double rho, double beta) {
    if (q != 2 && q != 3) throw DomainError("lambda_d: only q = 2 and q = 3");
    check_rho_beta(rho, beta);
    if (!(d >= 0.0 && d <= 2.0)) throw DomainError("lambda_d: d must lie in [0, 2]");
    const double c = q == 2 ? 1.0 : 3.0;
    const double base = 1.0 + c * rho * rho;
    if (d == 0.0 || beta == 0.0) return beta * d * d + std::log(base);
    const double bd2 = beta * d * d;
    const auto g = [&](double y) { return y * y / (base - std::exp(bd2 * (y * y - 1.0))); };
    const double integral = numerics::integrate_adaptive(g, 0.0, 1.0, kQuad);
    return bd2 + std::log(base) - bd2 * d * base * integral;
}

double h1_from_d(double d, double rho, double beta, int q) {
    check_q(q);
    check_rho_beta(rho, beta);
    const double lr = std::log(rho);
    if (d == 0.0 || beta == 0.0) return lr;
    return rate::cgf_inverse(q, rate::cgf(q, lr) + beta * d * d);
}

double h1_top(double rho, double beta, int q) { return h1_from_d(2.0 * half_of(q), rho, beta, q); }

std::vector<double> stationary_h1(double rho, double beta, int q) {
    check_q(q);
    check_rho_beta(rho, beta);
    if (beta == 0.0) return {};
    const double lr = std::log(rho);
    const double target = 2.0 * std::sqrt(beta);
    const double u_top = std::sqrt(h1_top(rho, beta, q) - lr);
    const double u_min = 1e-5;  // a = log rho + 1e-10
    if (!(u_top > u_min)) return {};

    // F is monotone between the endpoints of its dip.
    std::vector<double> knots{u_min};
    const Dip& d = cached_dip(q, rho);
    if (d.present) {
        if (d.x_max > u_min && d.x_max < u_top) knots.push_back(d.x_max);
        if (d.x_min > u_min && d.x_min < u_top) knots.push_back(d.x_min);
    }
    knots.push_back(u_top);

    const auto h = [&](double u) { return F_q(q, lr + u * u, rho) - target; };
    std::vector<double> roots;
    double h_prev = h(knots[0]);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double h_next = h(knots[i + 1]);
        if (h_next == 0.0) {
            roots.push_back(lr + knots[i + 1] * knots[i + 1]);
        } else if (h_prev != 0.0 && std::signbit(h_prev) != std::signbit(h_next)) {
            const double u = numerics::bisect(h, {knots[i], knots[i + 1], h_prev, h_next}, 1e-13);
            roots.push_back(lr + u * u);
        }
        h_prev = h_next;
    }
    return roots;
}

LyapunovResult lyapunov(double rho, double beta, int q) {
    check_q(q);
    check_rho_beta(rho, beta);
    const double lr = std::log(rho);
    const double f0 = rate::cgf(q, lr);
    LyapunovResult r;
    r.value = f0;
    r.branch = Branch::BoundaryZero;
    r.h1 = lr;
    r.d_star = 0.0;
    if (beta == 0.0) return r;

    const auto d_of = [&](double h1) { return std::sqrt(std::max(0.0, rate::cgf(q, h1) - f0) / beta); };
    const auto consider = [&](double value, Branch b, double h1) {
        if (value > r.value) {
            r.value = value;
            r.branch = b;
            r.h1 = h1;
            r.d_star = d_of(h1);
        }
    };

    r.all_stationary_h1 = stationary_h1(rho, beta, q);
    for (double h1 : r.all_stationary_h1) consider(lambda_from_h1(h1, rho, beta, q), Branch::Stationary, h1);

    const double top = h1_top(rho, beta, q);
    consider(lambda_from_h1(top, rho, beta, q), Branch::BoundaryTop, top);

    const double floor = bounds_and_asymptotics(rho, beta, q).lower;
    if (floor > r.value + 1e-9 * std::max(1.0, std::abs(r.value))) {
        r.value = floor;
        r.branch = Branch::LowerBoundFloor;
        r.h1 = top;
        r.d_star = 2.0 * half_of(q);
        r.floor_won = true;
    }
    return r;
}

Bounds bounds_and_asymptotics(double rho, double beta, int q) {
    check_q(q);
    check_rho_beta(rho, beta);
    const int K = half_of(q);
    const double lr = std::log(rho);
    const double drift = 4.0 / 3.0 * beta * K * K;
    Bounds b;
    b.lower = drift + 2.0 * K * lr - rate::rate(q, 2.0 * K);
    b.upper = drift + rate::cgf(q, lr);
    b.large_beta_slope = 4.0 / 3.0 * K * K;
    b.large_rho_form = b.lower;
    return b;
}

MeanField meanfield(double rho, double beta, int q) {
    check_q(q);
    check_rho_beta(rho, beta);
    const double lr = std::log(rho);
    const auto g = [&](double a) { return a * lr + beta * a * a / 3.0 - rate::rate(q, a); };
    const numerics::Extremum e = numerics::maximize_scan_refine(g, 0.0, 2.0 * half_of(q), 2001);
    return {e.max, e.argmax};
}

double meanfield_phase(int q, double rho) {
    if (!(rho > 0.0)) throw DomainError("meanfield_phase: rho must be positive");
    const auto [rc, bc] = meanfield_critical_point(q);
    (void)bc;
    if (rho >= rc) throw NoTransition("meanfield_phase: rho beyond the mean-field critical point");
    if (q == 2) return -1.5 * std::log(rho);
    return -0.75 * std::log(3.0 * rho * rho);
}

std::pair<double, double> meanfield_critical_point(int q) {
    if (q == 2) return {std::exp(-1.0), 1.5};
    if (q == 3) return {1.0 / (std::sqrt(3.0) * std::exp(1.0)), 1.5};
    throw DomainError("meanfield closed forms exist only for q = 2 and q = 3");
}

double meanfield_phase_numeric(int q, double rho) {
    check_q(q);
    check_rho_beta(rho, 0.0);
    const Landscape L = meanfield_landscape(q, rho);
    const Dip d = find_dip(L);
    if (!d.present) throw NoTransition("meanfield_phase_numeric: no coexisting maxima at this rho");
    return crossing_beta(L, d);
}

double beta_cr(int q, double rho) {
    check_q(q);
    check_rho_beta(rho, 0.0);
    const Dip& d = cached_dip(q, rho);
    if (!d.present) throw NoTransition("beta_cr: rho=" + std::to_string(rho) + " lies beyond the critical point");
    return crossing_beta(exact_landscape(q, rho), d);
}

std::pair<double, double> critical_point(int q) {
    check_q(q);
    const auto min_slope = [&](double rho) {
        const Landscape L = exact_landscape(q, rho);
        const auto neg = [&](double x) { return -L.slope(x); };
        return -numerics::maximize_scan_refine(neg, L.x_lo, L.x_hi, 200).max;
    };
    double lo = 0.01, hi = 2.0;
    double m_lo = min_slope(lo), m_hi = min_slope(hi);
    if (!(m_lo < 0.0 && m_hi > 0.0)) throw NonConvergent("critical_point: dip not bracketed in rho");
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double m = min_slope(mid);
        if (m < 0.0) {
            lo = mid;
            m_lo = m;
        } else {
            hi = mid;
            m_hi = m;
        }
    }
    const double rho_c = 0.5 * (lo + hi);
    const Landscape L = exact_landscape(q, rho_c);
    const auto neg = [&](double x) { return -L.slope(x); };
    const numerics::Extremum e = numerics::maximize_scan_refine(neg, L.x_lo, L.x_hi, 400);
    return {rho_c, L.beta_of(L.level(e.argmax))};
}

PhaseCurve phase_curve(int q, const std::vector<double>& rho_grid, int workers) {
    check_q(q);
    PhaseCurve pc;
    pc.q = q;
    pc.critical_point = critical_point(q);
    std::vector<std::optional<double>> out(rho_grid.size());
    parallel_for(rho_grid.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            if (rho_grid[i] >= pc.critical_point.first) continue;
            try {
                out[i] = beta_cr(q, rho_grid[i]);
            } catch (const NoTransition&) {
            }
        }
    });
    for (std::size_t i = 0; i < rho_grid.size(); ++i)
        if (out[i]) pc.samples.emplace_back(rho_grid[i], *out[i]);
    return pc;
}

double explosion_threshold(double sigma0, double tau, int n, int q) {
    if (!(sigma0 > 0.0) || !(tau > 0.0) || n < 1) throw DomainError("explosion_threshold: invalid market inputs");
    const double b = beta_cr(q, sigma0 * std::sqrt(tau));
    return std::sqrt(2.0 * b / (static_cast<double>(n) * n * tau));
}

csv::Table lyapunov_sweep(double rho, int q, const std::vector<double>& betas) {
    csv::Table t({"beta", "lambda", "d_star", "branch", "lower", "upper"});
    for (double b : betas) {
        const LyapunovResult r = lyapunov(rho, b, q);
        const Bounds bd = bounds_and_asymptotics(rho, b, q);
        t.add({csv::num(b), csv::num(r.value), csv::num(r.d_star), std::string(to_string(r.branch)), csv::num(bd.lower),
               csv::num(bd.upper)});
    }
    return t;
}

}  // namespace svasym::euler
