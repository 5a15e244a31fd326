#pragma once

#include "svasym/csv.hpp"

#include <vector>

// Closed-form Lyapunov exponents for the log-Euler asset update.
namespace svasym::lognormal {

struct XiSolution {
    double xi;
    double a;
    double b;
};

/// Root of 2 xi^2 = a b^2 cos^2 xi on (0, pi/2).
XiSolution solve_xi(double a, double b);

/// lambda(a, b) = a (cos^2 xi - sin(2 xi) / xi); 0 at a = 0 and -a at b = 0.
double lambda_ab(double a, double b);

/// Either a finite exponent or the tag for an infinite moment.
struct LnExponent {
    bool infinite = false;
    double value = 0.0;
};

/// lambda(rho^2 q (1-q) / 2, 2 sqrt(2 beta)) for 0 <= q <= 1, infinite otherwise
/// unless beta = 0.
LnExponent lyapunov_ln(double rho, double beta, double q);

/// (1/b) log(cos^2 xi / cos^2(xi (x - 1))).
double optimal_profile(double a, double b, double x);

/// -a int_0^1 e^{b g} dx - (1/2) int_0^1 g'^2 dx on the optimal profile, by quadrature.
double profile_functional(double a, double b);

/// Rows a,b,lambda over the product grid.
csv::Table lambda_grid(const std::vector<double>& as, const std::vector<double>& bs);

}  // namespace svasym::lognormal
