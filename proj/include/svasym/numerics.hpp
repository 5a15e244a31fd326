#pragma once

#include <functional>
#include <span>
#include <vector>

namespace svasym::numerics {

using ScalarFn = std::function<double(double)>;

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 60;

    void validate() const;
};

/// A sign-change bracket: lo < hi and f_lo, f_hi of opposite sign.
struct Bracket {
    double lo;
    double hi;
    double f_lo;
    double f_hi;
};

struct Extremum {
    double argmax;
    double max;
};

/// Adaptive Simpson quadrature of f over [a, b].
///
/// Endpoint singularities must be removed by the caller; f is evaluated
/// at both endpoints. Throws NonConvergent when max_depth is exhausted
/// on any subinterval without meeting the local tolerance.
double integrate_adaptive(const ScalarFn& f, double a, double b, const QuadratureSpec& spec = {});

/// g evaluated at s + offset for a singular point s, with the offset exact.
using LocalFn = std::function<double(double s, double offset)>;

/// E[g(X)] for X ~ N(0,1), truncated to |x| <= 12.
///
/// Each point in `singularities` inside the truncation window splits the
/// domain; the half-intervals adjacent to a singular point are integrated
/// after the substitution x = s +/- u^2, which absorbs logarithmic
/// (and weaker) singularities. g is never evaluated at a singular point.
/// When `local` is given it replaces g on those half-intervals, so that
/// s + u^2 need not be rounded before g sees it.
double gaussian_expectation(const ScalarFn& g, const QuadratureSpec& spec = {},
                            std::span<const double> singularities = {}, const LocalFn& local = {});

/// Convenience overload for one singular point.
double gaussian_expectation(const ScalarFn& g, const QuadratureSpec& spec, double singularity);

/// Roots of f on [lo, hi] located on a uniform grid of `grid` intervals and
/// refined by bisection to an interval width of 1e-12.
///
/// Returned in ascending order. Grid points where f vanishes exactly are
/// reported as roots. A tangential root (no sign change between grid
/// points) is missed.
std::vector<double> find_roots(const ScalarFn& f, double lo, double hi, int grid);

/// Bisection on a sign-change bracket down to `width`.
double bisect(const ScalarFn& f, Bracket b, double width = 1e-12);

/// Maximizes f on [lo, hi]: `grid` equispaced samples including both
/// endpoints, then golden-section refinement around the best interior
/// sample to 1e-10 in the argument. Ties go to the smaller argument.
Extremum maximize_scan_refine(const ScalarFn& f, double lo, double hi, int grid);

/// Golden-section maximization of a unimodal f on [lo, hi].
Extremum golden_section_max(const ScalarFn& f, double lo, double hi, double tol = 1e-10);

/// Standard normal density.
double normal_pdf(double x);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x);
    void merge(const CompensatedSum& other);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace svasym::numerics
