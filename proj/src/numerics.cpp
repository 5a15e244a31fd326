#include "svasym/numerics.hpp"

#include "svasym/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace svasym::numerics {

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("QuadratureSpec: tolerances must be positive");
    if (max_depth < 1) throw DomainError("QuadratureSpec: max_depth must be at least 1");
}

namespace {

struct SimpsonPanel {
    double a, m, b;
    double fa, fm, fb;
    double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

// Classic recursive adaptive Simpson with Richardson correction.
double adapt(const ScalarFn& f, const SimpsonPanel& p, double eps, int depth, int max_depth) {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
    const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;
    // The last clause stops refinement once the correction sits at roundoff level.
    if (std::abs(delta) <= 15.0 * eps || lm <= p.a || rm >= p.b || p.m <= p.a ||
        std::abs(delta) <= 1e-14 * (std::abs(left) + std::abs(right)))
        return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw NonConvergent("integrate_adaptive: max_depth exhausted near x=" + std::to_string(p.m));
    // Past depth 30 the local tolerance stops shrinking: the few panels that deep
    // cluster around isolated points, and their rounding noise does not decay.
    const double child_eps = depth < 30 ? 0.5 * eps : eps;
    return adapt(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, child_eps, depth + 1, max_depth) +
           adapt(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, child_eps, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const ScalarFn& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return 0.0;
    if (a > b) return -integrate_adaptive(f, b, a, spec);

    // Eight initial panels guard against a lucky early acceptance on peaked integrands.
    constexpr int panels = 8;
    std::vector<double> x(2 * panels + 1), fx(2 * panels + 1);
    const double h = (b - a) / (2 * panels);
    for (int i = 0; i <= 2 * panels; ++i) {
        x[i] = (i == 2 * panels) ? b : a + i * h;
        fx[i] = f(x[i]);
    }
    double rough = 0.0;
    for (int k = 0; k < panels; ++k) rough += simpson(x[2 * k], x[2 * k + 2], fx[2 * k], fx[2 * k + 1], fx[2 * k + 2]);
    if (!std::isfinite(rough)) throw NonConvergent("integrate_adaptive: non-finite integrand");

    const double eps = std::max(spec.abs_tol, spec.rel_tol * std::abs(rough)) / panels;
    CompensatedSum total;
    for (int k = 0; k < panels; ++k) {
        const SimpsonPanel p{x[2 * k], x[2 * k + 1], x[2 * k + 2], fx[2 * k], fx[2 * k + 1], fx[2 * k + 2],
                             simpson(x[2 * k], x[2 * k + 2], fx[2 * k], fx[2 * k + 1], fx[2 * k + 2])};
        total.add(adapt(f, p, eps, 1, spec.max_depth));
    }
    const double r = total.value();
    if (!std::isfinite(r)) throw NonConvergent("integrate_adaptive: non-finite result");
    return r;
}

double normal_pdf(double x) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double gaussian_expectation(const ScalarFn& g, const QuadratureSpec& spec, std::span<const double> singularities,
                            const LocalFn& local) {
    constexpr double cut = 12.0;
    std::vector<double> sing;
    for (double s : singularities)
        if (std::isfinite(s) && s > -cut && s < cut) sing.push_back(s);
    std::sort(sing.begin(), sing.end());
    sing.erase(std::unique(sing.begin(), sing.end()), sing.end());

    auto plain = [&](double x) { return g(x) * normal_pdf(x); };
    // Integral over [s, s + len] (dir=+1) or [s - len, s] (dir=-1) with x = s + dir*u^2.
    auto from_singular = [&](double s, double len, int dir) {
        auto h = [&, s, dir](double u) {
            if (u == 0.0) return 0.0;
            const double off = dir * u * u;
            const double x = s + off;
            const double v = 2.0 * u * (local ? local(s, off) : g(x)) * normal_pdf(x);
            return std::isfinite(v) ? v : 0.0;  // x landed on the singular point itself
        };
        return integrate_adaptive(h, 0.0, std::sqrt(len), spec);
    };

    if (sing.empty()) {
        // Split at zero so the peak sits on a panel boundary.
        return integrate_adaptive(plain, -cut, 0.0, spec) + integrate_adaptive(plain, 0.0, cut, spec);
    }

    CompensatedSum total;
    // Left tail up to the first singular point.
    total.add(from_singular(sing.front(), sing.front() + cut, -1));
    for (std::size_t i = 0; i + 1 < sing.size(); ++i) {
        const double half = 0.5 * (sing[i + 1] - sing[i]);
        total.add(from_singular(sing[i], half, +1));
        total.add(from_singular(sing[i + 1], half, -1));
    }
    total.add(from_singular(sing.back(), cut - sing.back(), +1));
    return total.value();
}

double gaussian_expectation(const ScalarFn& g, const QuadratureSpec& spec, double singularity) {
    const double s[1] = {singularity};
    return gaussian_expectation(g, spec, std::span<const double>(s, 1));
}

double bisect(const ScalarFn& f, Bracket b, double width) {
    if (!(b.lo < b.hi)) throw DomainError("bisect: lo must be below hi");
    if (b.f_lo == 0.0) return b.lo;
    if (b.f_hi == 0.0) return b.hi;
    if (std::signbit(b.f_lo) == std::signbit(b.f_hi)) throw DomainError("bisect: no sign change in bracket");
    while (b.hi - b.lo > width) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(b.f_lo)) {
            b.lo = mid;
            b.f_lo = fm;
        } else {
            b.hi = mid;
            b.f_hi = fm;
        }
    }
    return 0.5 * (b.lo + b.hi);
}

std::vector<double> find_roots(const ScalarFn& f, double lo, double hi, int grid) {
    if (grid < 2) throw DomainError("find_roots: grid must be at least 2");
    if (!(lo < hi)) throw DomainError("find_roots: lo must be below hi");
    std::vector<double> x(grid + 1), fx(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        x[i] = (i == grid) ? hi : lo + (hi - lo) * i / grid;
        fx[i] = f(x[i]);
    }
    std::vector<double> roots;
    for (int i = 0; i <= grid; ++i) {
        if (fx[i] == 0.0) {
            roots.push_back(x[i]);
            continue;
        }
        if (i < grid && fx[i + 1] != 0.0 && std::signbit(fx[i]) != std::signbit(fx[i + 1]))
            roots.push_back(bisect(f, {x[i], x[i + 1], fx[i], fx[i + 1]}));
    }
    return roots;
}

Extremum golden_section_max(const ScalarFn& f, double lo, double hi, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
        if (c >= d) break;
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

Extremum maximize_scan_refine(const ScalarFn& f, double lo, double hi, int grid) {
    if (grid < 3) throw DomainError("maximize_scan_refine: grid must be at least 3");
    if (!(lo < hi)) throw DomainError("maximize_scan_refine: lo must be below hi");
    std::vector<double> x(grid), fx(grid);
    for (int i = 0; i < grid; ++i) {
        x[i] = (i == grid - 1) ? hi : lo + (hi - lo) * i / (grid - 1);
        fx[i] = f(x[i]);
    }
    int best = 0;
    for (int i = 1; i < grid; ++i)
        if (fx[i] > fx[best]) best = i;

    Extremum result{x[best], fx[best]};
    if (best > 0 && best < grid - 1) {
        const Extremum refined = golden_section_max(f, x[best - 1], x[best + 1]);
        if (refined.max > result.max) result = refined;
    }
    // Endpoints compete with the refined interior candidate; ties go left.
    auto consider = [&](double xa, double fa) {
        if (fa > result.max || (fa == result.max && xa < result.argmax)) result = {xa, fa};
    };
    consider(lo, fx.front());
    consider(hi, fx.back());
    return result;
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

void CompensatedSum::merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
}

}  // namespace svasym::numerics
