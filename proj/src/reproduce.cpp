#include "svasym/reproduce.hpp"

#include "svasym/errors.hpp"
#include "svasym/exact_moments.hpp"
#include "svasym/limit_laws.hpp"
#include "svasym/lyapunov_euler.hpp"
#include "svasym/lyapunov_lognormal.hpp"
#include "svasym/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace svasym {

namespace {

std::vector<double> grid(double lo, double step, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = lo + i * step;
    return v;
}

// Lyapunov exponent of the Euler asset vs beta at several rho.
csv::Table lambda_panel(int q, const std::vector<double>& rhos, int workers) {
    const std::vector<double> betas = grid(0.0, 0.05, 101);
    std::vector<csv::Table> parts(rhos.size(), csv::Table({}));
    parallel_for(rhos.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) parts[i] = euler::lyapunov_sweep(rhos[i], q, betas);
    });
    csv::Table t({"q", "rho", "beta", "lambda", "d_star", "branch", "lower", "upper"});
    for (std::size_t i = 0; i < rhos.size(); ++i)
        for (const auto& row : parts[i].rows()) {
            std::vector<std::string> r{std::to_string(q), csv::num(rhos[i])};
            r.insert(r.end(), row.begin(), row.end());
            t.add(std::move(r));
        }
    return t;
}

csv::Table fig3() {
    csv::Table t({"panel", "a", "b", "lambda"});
    for (double b : {0.5, 1.0, 2.0, 4.0})
        for (double a : grid(0.0, 0.05, 81)) t.add({"vs_a", csv::num(a), csv::num(b), csv::num(lognormal::lambda_ab(a, b))});
    for (double a : {0.25, 0.5, 1.0, 2.0})
        for (double b : grid(0.0, 0.1, 101)) t.add({"vs_b", csv::num(a), csv::num(b), csv::num(lognormal::lambda_ab(a, b))});
    return t;
}

csv::Table fig4(int workers) {
    csv::Table t({"series", "q", "rho", "beta_cr"});
    for (int q = 2; q <= 7; ++q) {
        const euler::PhaseCurve pc = euler::phase_curve(q, grid(0.01, 0.01, 40), workers);
        for (const auto& [rho, beta] : pc.samples) t.add({"exact", std::to_string(q), csv::num(rho), csv::num(beta)});
        t.add({"exact_critical", std::to_string(q), csv::num(pc.critical_point.first), csv::num(pc.critical_point.second)});
    }
    for (int q = 2; q <= 3; ++q) {
        const auto [rc, bc] = euler::meanfield_critical_point(q);
        for (double rho : grid(0.01, 0.01, 40)) {
            if (rho >= rc) break;
            t.add({"meanfield", std::to_string(q), csv::num(rho), csv::num(euler::meanfield_phase(q, rho))});
        }
        t.add({"meanfield_critical", std::to_string(q), csv::num(rc), csv::num(bc)});
    }
    return t;
}

struct SigmaSeries {
    std::string panel;
    int q;
    ModelParams base;
};

// Finite-n and large-n log-normal equivalent volatility vs omega.
csv::Table sigma_ln(const std::vector<SigmaSeries>& series, int workers) {
    double omega_hi = 0.0;
    for (const SigmaSeries& s : series)
        omega_hi = std::max(omega_hi, euler::explosion_threshold(s.base.sigma0, s.base.tau, s.base.n, s.q));
    const int points = 61;
    const std::vector<double> omegas = grid(0.0, 1.3 * omega_hi / (points - 1), points);

    struct Cell {
        double finite;
        double proxy;
    };
    std::vector<Cell> cells(series.size() * omegas.size());
    parallel_for(cells.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const SigmaSeries& s = series[i / omegas.size()];
            ModelParams p = s.base;
            p.omega = omegas[i % omegas.size()];
            cells[i] = {exact::ln_equiv_vol(s.q, p), exact::ln_equiv_vol_proxy(s.q, p)};
        }
    });

    csv::Table t({"panel", "q", "n", "tau", "sigma0", "omega", "sigma_ln_finite", "sigma_ln_asymptotic"});
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const SigmaSeries& s = series[i / omegas.size()];
        t.add({s.panel, std::to_string(s.q), std::to_string(s.base.n), csv::num(s.base.tau), csv::num(s.base.sigma0),
               csv::num(omegas[i % omegas.size()]), csv::num(cells[i].finite), csv::num(cells[i].proxy)});
    }
    return t;
}

ModelParams market(double sigma0, double tau, int n) {
    ModelParams p;
    p.sigma0 = sigma0;
    p.tau = tau;
    p.n = n;
    return p;
}

csv::Table fig5(int workers) {
    std::vector<SigmaSeries> upper, lower;
    for (int n : {10, 20, 40}) upper.push_back({"upper", 2, market(0.2, 1.0 / n, n)});
    for (double s0 : {0.05, 0.1, 0.2, 0.5}) lower.push_back({"lower", 2, market(s0, 0.25, 80)});
    csv::Table t = sigma_ln(upper, workers);
    const csv::Table below = sigma_ln(lower, workers);
    for (const auto& row : below.rows()) t.add(row);
    return t;
}

csv::Table fig6(int workers) {
    return sigma_ln({{"main", 2, market(0.2, 0.25, 40)}, {"main", 3, market(0.2, 0.25, 40)}}, workers);
}

csv::Table table1(int workers) {
    std::vector<std::pair<double, double>> cps(6);
    parallel_for(cps.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) cps[i] = euler::critical_point(static_cast<int>(i) + 2);
    });
    csv::Table t({"q", "rho_c", "beta_c", "inv_beta_c"});
    for (std::size_t i = 0; i < cps.size(); ++i)
        t.add({std::to_string(i + 2), csv::num(cps[i].first), csv::num(cps[i].second), csv::num(1.0 / cps[i].second)});
    return t;
}

csv::Table expint() { return limits::lln_curve(grid(0.01, 0.01, 300)); }

}  // namespace

const std::vector<std::string>& reproduce_targets() {
    static const std::vector<std::string> ids{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "table1", "expint"};
    return ids;
}

csv::Table reproduce(std::string_view target, int workers) {
    if (target == "fig1") return lambda_panel(2, {0.05, 0.1, 0.2, 0.3, 0.348, 0.4, 0.5}, workers);
    if (target == "fig2") return lambda_panel(3, {0.05, 0.1, 0.201, 0.3}, workers);
    if (target == "fig3") return fig3();
    if (target == "fig4") return fig4(workers);
    if (target == "fig5") return fig5(workers);
    if (target == "fig6") return fig6(workers);
    if (target == "table1") return table1(workers);
    if (target == "expint") return expint();
    throw UnknownTarget("unknown reproduce target '" + std::string(target) + "'");
}

}  // namespace svasym
