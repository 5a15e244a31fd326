#pragma once

#include "svasym/csv.hpp"

#include <vector>

// Almost-sure growth rates of log|S_n| / n and the variances of their
// Gaussian fluctuations.
namespace svasym::limits {

enum class Family { EulerAsset, LogEulerAsset };

struct LimitConstants {
    double lln_slope;
    double clt_variance;
    Family scheme_family;
};

/// E[log|1 + rho eps|].
double lln_euler(double rho);

/// Root of lln_euler on [1, 2].
double lln_root();

/// Var[log|1 + rho eps|].
double log_abs_variance(double rho);

/// Var[|1 + rho eps|], the alternative reading of the Euler volatility case.
double abs_variance(double rho);

/// H(x) = E[log|1 + eps x / (1 + rho eps)|].
double shift_response(double rho, double x);

/// H'(0) by central differences with a step-halving consistency check.
double shift_slope(double rho);

/// (2/3) H'(0)^2 rho^2 beta + Var[log|1 + rho eps|]. With `abs_variant`
/// the second term is Var[|1 + rho eps|] instead.
double clt_variance_euler(double rho, double beta, bool abs_variant = false);

double clt_variance_lognormal(double rho, double beta);

double lln_lognormal(double rho);

LimitConstants constants(Family fam, double rho, double beta, bool abs_variant = false);

/// Rows rho,lln for the Euler asset growth rate.
csv::Table lln_curve(const std::vector<double>& rhos);

}  // namespace svasym::limits
