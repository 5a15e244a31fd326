#pragma once

#include "svasym/csv.hpp"
#include "svasym/params.hpp"

#include <vector>

// Exact integer moments E[S_n^q] of the Euler asset / log-Euler volatility
// scheme with zero correlation, by backward conditioning on the volatility
// driver.
namespace svasym::exact {

/// Maximum coefficient count of one layer before CapacityExceeded.
inline constexpr long long kLayerGuard = 10'000'000;

struct MomentTable {
    double log_moment = 0.0;  // log(E[S_n^q] / S0^q)
    int q = 1;
    int n = 1;
    ModelParams params;
};

/// One coefficient of a layer, kept as log magnitude and sign.
struct LogCoeff {
    double log_mag;
    int sign;
};

MomentTable moment_dp(int q, const ModelParams& p);

/// Direct enumeration over all multi-indices; n <= 8, q <= 6.
double moment_bruteforce(int q, const ModelParams& p);

/// (1/n) log(E[S_n^q] / S0^q).
double finite_lyapunov(int q, const ModelParams& p);

/// Log-normal-equivalent volatility implied by the q-th moment at t_n.
double ln_equiv_vol(int q, const ModelParams& p);

/// The large-n proxy sqrt(2 lambda / (q (q-1) tau)) built from the Lyapunov exponent.
double ln_equiv_vol_proxy(int q, const ModelParams& p);

/// Rows q,n,omega,sigma0,tau,rho,beta,log_moment,lambda_qn,sigma_ln for each omega.
csv::Table moment_sweep(int q, const ModelParams& base, const std::vector<double>& omegas);

}  // namespace svasym::exact
