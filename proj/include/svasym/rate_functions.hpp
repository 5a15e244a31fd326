#pragma once

#include <cstdint>
#include <vector>

// Cumulant machinery for the tilted Gaussian-moment variables Y_k.
//
// With c_j = q!/((2j)!(q-2j)!) (2j-1)!!, j = 0..[q/2], Y takes the value 2j
// with probability c_j / m(q). The cumulant
//     f_q(theta) = log sum_j c_j e^{2 j theta} = log E[(1 + eps e^theta)^q]
// and its Legendre transform I_q drive the Euler-asset Lyapunov exponents.
namespace svasym::rate {

/// Law of Y for one moment order. Immutable once built.
struct TiltedLaw {
    int q = 0;
    int half = 0;                  // [q/2]
    std::vector<double> log_coeff; // log c_j
    std::vector<double> weights;   // c_j / m(q)
    double normalizer = 1.0;       // m(q)
};

/// Cached law for order q >= 0. Thread-safe.
const TiltedLaw& tilted_law(int q);

/// m(q) as an exact integer; throws Overflow for q > 20.
std::uint64_t normalizer_exact(int q);

/// m(q); exact up to q = 20, floating point beyond.
double normalizer(int q);

/// log of the top coefficient c_{[q/2]}.
double log_top_coeff(int q);

double cgf(int q, double theta);
double cgf_deriv(int q, double theta);
double cgf_deriv2(int q, double theta);
double cgf_deriv3(int q, double theta);

/// f_q(a) - f_q(a - s) for s >= 0 without cancellation at small s.
double cgf_drop(int q, double a, double s);

/// f_q'(a) - f_q'(a - s) for s >= 0 without cancellation at small s.
double cgf_deriv_drop(int q, double a, double s);

/// The theta solving f_q(theta) = y for y > 0 and q >= 2.
double cgf_inverse(int q, double y);

/// The tilt theta* solving f_q'(theta*) = x for 0 < x < 2[q/2].
double tilt_for_mean(int q, double x);

/// I_q(x) on [0, 2[q/2]]. Closed forms for q = 2..5, Legendre transform otherwise.
double rate(int q, double x);

/// I_q(x) through the numeric Legendre transform for every q.
double rate_numeric(int q, double x);

/// Closed-form I_q(x) for q in 2..5; throws DomainError for other q.
double rate_closed_form(int q, double x);

}  // namespace svasym::rate
