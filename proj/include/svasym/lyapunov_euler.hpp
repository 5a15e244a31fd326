#pragma once

#include "svasym/csv.hpp"

#include <string_view>
#include <utility>
#include <vector>

// Moment Lyapunov exponent of the Euler asset update (log-Euler or Euler
// volatility) through the reduced one-dimensional problem in h1 = h(1).
namespace svasym::euler {

enum class Branch {
    BoundaryZero,    // d = 0: the constant-volatility value f_q(log rho)
    Stationary,      // interior root of F_q(h1) = 2 sqrt(beta)
    BoundaryTop,     // d = 2[q/2]: the top of the admissible range
    LowerBoundFloor  // the analytic lower bound beat every other candidate
};

std::string_view to_string(Branch b);

struct LyapunovResult {
    double value = 0.0;
    Branch branch = Branch::BoundaryZero;
    double h1 = 0.0;
    double d_star = 0.0;
    std::vector<double> all_stationary_h1;
    bool floor_won = false;  // diagnostic: set when LowerBoundFloor is the branch
};

/// F_q(a; rho) = int_{log rho}^a dx / sqrt(f_q(a) - f_q(x)).
double F_q(int q, double a, double rho);

/// dF_q/da for a > log rho.
double F_q_deriv(int q, double a, double rho);

/// Roots of F_q(a; rho) = 2 sqrt(beta) with a in (log rho, top of the admissible range].
std::vector<double> stationary_h1(double rho, double beta, int q);

/// f_q(h1) - beta^{-1/2} int_{log rho}^{h1} sqrt(f_q(h1) - f_q(x)) dx.
double lambda_from_h1(double h1, double rho, double beta, int q);

/// The d-parametrized functional for q in {2, 3}, d in [0, 2].
double lambda_d(int q, double d, double rho, double beta);

/// h1 corresponding to d via f_q(h1) = f_q(log rho) + beta d^2.
double h1_from_d(double d, double rho, double beta, int q);

/// The largest admissible h1: f_q(h1) = f_q(log rho) + 4 [q/2]^2 beta.
double h1_top(double rho, double beta, int q);

LyapunovResult lyapunov(double rho, double beta, int q);

struct Bounds {
    double lower;
    double upper;
    double large_beta_slope;
    double large_rho_form;
};

Bounds bounds_and_asymptotics(double rho, double beta, int q);

struct MeanField {
    double value;
    double a_star;
};

/// Maximum of a log rho + beta a^2 / 3 - I_q(a) over a in [0, 2[q/2]].
MeanField meanfield(double rho, double beta, int q);

/// Closed-form mean-field transition curve for q in {2, 3}.
double meanfield_phase(int q, double rho);

/// Closed-form mean-field critical point (rho_c, beta_c) for q in {2, 3}.
std::pair<double, double> meanfield_critical_point(int q);

/// Mean-field transition located numerically by branch crossing, any q >= 2.
double meanfield_phase_numeric(int q, double rho);

/// Transition beta at which the global maximizer switches branch.
/// Throws NoTransition when rho lies beyond the critical point.
double beta_cr(int q, double rho);

/// Critical point (rho_c, beta_c) where the competing maxima merge.
std::pair<double, double> critical_point(int q);

struct PhaseCurve {
    int q = 2;
    std::vector<std::pair<double, double>> samples;  // (rho, beta_cr)
    std::pair<double, double> critical_point;
};

/// beta_cr on every grid point below the critical point, plus the critical point.
PhaseCurve phase_curve(int q, const std::vector<double>& rho_grid, int workers = 1);

/// Vol-of-vol at which a run with (sigma0, tau, n) sits on the transition curve.
double explosion_threshold(double sigma0, double tau, int n, int q);

/// Rows beta,lambda,d_star,branch,lower,upper for a beta sweep.
csv::Table lyapunov_sweep(double rho, int q, const std::vector<double>& betas);

}  // namespace svasym::euler
