#include "svasym/rate_functions.hpp"

#include "svasym/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <string>

namespace svasym::rate {

namespace {

constexpr int kExactMax = 20;
constexpr int kCacheMax = 256;

std::uint64_t binomial_exact(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

std::uint64_t odd_double_factorial(int m) {  // (2m-1)!!, with (-1)!! = 1
    std::uint64_t r = 1;
    for (int i = 1; i <= m; ++i) r *= static_cast<std::uint64_t>(2 * i - 1);
    return r;
}

double log_coeff_of(int q, int j) {
    if (q <= kExactMax) return std::log(static_cast<double>(binomial_exact(q, 2 * j) * odd_double_factorial(j)));
    // log[q!/((2j)!(q-2j)!)] + log[(2j)!/(2^j j!)]
    return std::lgamma(q + 1.0) - std::lgamma(q - 2.0 * j + 1.0) - j * std::log(2.0) - std::lgamma(j + 1.0);
}

TiltedLaw build_law(int q) {
    if (q < 0) throw DomainError("tilted_law: q must be nonnegative");
    TiltedLaw law;
    law.q = q;
    law.half = q / 2;
    law.log_coeff.resize(law.half + 1);
    for (int j = 0; j <= law.half; ++j) law.log_coeff[j] = log_coeff_of(q, j);
    const double lmax = *std::max_element(law.log_coeff.begin(), law.log_coeff.end());
    double s = 0.0;
    for (double lc : law.log_coeff) s += std::exp(lc - lmax);
    const double log_m = lmax + std::log(s);
    law.normalizer = q <= kExactMax ? static_cast<double>(normalizer_exact(q)) : std::exp(log_m);
    law.weights.resize(law.half + 1);
    for (int j = 0; j <= law.half; ++j) law.weights[j] = std::exp(law.log_coeff[j] - log_m);
    return law;
}

// Tilted probabilities p_j(theta) and the log partition function.
struct Tilt {
    double log_z;
    std::array<double, 64> stack_p;
    std::vector<double> heap_p;
    double* p;
};

void tilt(const TiltedLaw& law, double theta, Tilt& t) {
    const int K = law.half;
    if (K + 1 <= static_cast<int>(t.stack_p.size())) {
        t.p = t.stack_p.data();
    } else {
        t.heap_p.assign(K + 1, 0.0);
        t.p = t.heap_p.data();
    }
    double tmax = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= K; ++j) {
        t.p[j] = law.log_coeff[j] + 2.0 * j * theta;
        tmax = std::max(tmax, t.p[j]);
    }
    double s = 0.0;
    for (int j = 0; j <= K; ++j) {
        t.p[j] = std::exp(t.p[j] - tmax);
        s += t.p[j];
    }
    for (int j = 0; j <= K; ++j) t.p[j] /= s;
    t.log_z = tmax + std::log(s);
}

}  // namespace

const TiltedLaw& tilted_law(int q) {
    if (q < 0) throw DomainError("tilted_law: q must be nonnegative");
    if (q > kCacheMax) {
        thread_local TiltedLaw scratch;
        scratch = build_law(q);
        return scratch;
    }
    static std::array<std::unique_ptr<TiltedLaw>, kCacheMax + 1> cache;
    static std::array<std::once_flag, kCacheMax + 1> flags;
    std::call_once(flags[q], [q] { cache[q] = std::make_unique<TiltedLaw>(build_law(q)); });
    return *cache[q];
}

std::uint64_t normalizer_exact(int q) {
    if (q < 0) throw DomainError("normalizer: q must be nonnegative");
    if (q > kExactMax) throw Overflow("normalizer_exact: q=" + std::to_string(q) + " exceeds exact range (q<=20)");
    std::uint64_t m = 0;
    for (int j = 0; j <= q / 2; ++j) m += binomial_exact(q, 2 * j) * odd_double_factorial(j);
    return m;
}

double normalizer(int q) { return tilted_law(q).normalizer; }

double log_top_coeff(int q) { return tilted_law(q).log_coeff.back(); }

double cgf(int q, double theta) {
    const TiltedLaw& law = tilted_law(q);
    int jmax = 0;
    for (int j = 1; j <= law.half; ++j)
        if (law.log_coeff[j] + 2.0 * j * theta > law.log_coeff[jmax] + 2.0 * jmax * theta) jmax = j;
    const double tmax = law.log_coeff[jmax] + 2.0 * jmax * theta;
    double rest = 0.0;
    for (int j = 0; j <= law.half; ++j)
        if (j != jmax) rest += std::exp(law.log_coeff[j] + 2.0 * j * theta - tmax);
    return tmax + std::log1p(rest);
}

double cgf_deriv(int q, double theta) {
    Tilt t;
    const TiltedLaw& law = tilted_law(q);
    tilt(law, theta, t);
    double m = 0.0;
    for (int j = 0; j <= law.half; ++j) m += 2.0 * j * t.p[j];
    return m;
}

double cgf_deriv2(int q, double theta) {
    Tilt t;
    const TiltedLaw& law = tilted_law(q);
    tilt(law, theta, t);
    double m = 0.0;
    for (int j = 0; j <= law.half; ++j) m += 2.0 * j * t.p[j];
    double v = 0.0;
    for (int j = 0; j <= law.half; ++j) v += (2.0 * j - m) * (2.0 * j - m) * t.p[j];
    return v;
}

double cgf_deriv3(int q, double theta) {
    Tilt t;
    const TiltedLaw& law = tilted_law(q);
    tilt(law, theta, t);
    double m = 0.0;
    for (int j = 0; j <= law.half; ++j) m += 2.0 * j * t.p[j];
    double k3 = 0.0;
    for (int j = 0; j <= law.half; ++j) {
        const double d = 2.0 * j - m;
        k3 += d * d * d * t.p[j];
    }
    return k3;
}

double cgf_drop(int q, double a, double s) {
    if (s < 0.0) throw DomainError("cgf_drop: s must be nonnegative");
    if (s == 0.0) return 0.0;
    if (s > 1.0) return cgf(q, a) - cgf(q, a - s);
    // f(a) - f(a-s) = -log E_a[e^{-2 j s}] under the tilt at a.
    Tilt t;
    const TiltedLaw& law = tilted_law(q);
    tilt(law, a, t);
    double acc = 0.0;
    for (int j = 1; j <= law.half; ++j) acc += t.p[j] * std::expm1(-2.0 * j * s);
    return -std::log1p(acc);
}

double cgf_deriv_drop(int q, double a, double s) {
    if (s < 0.0) throw DomainError("cgf_deriv_drop: s must be nonnegative");
    if (s == 0.0) return 0.0;
    if (s > 1.0) return cgf_deriv(q, a) - cgf_deriv(q, a - s);
    // With e_j = e^{-2js}: sum_{j<k} 2(k-j) p_j p_k (e_j - e_k) / sum_j p_j e_j, every term nonnegative.
    Tilt t;
    const TiltedLaw& law = tilted_law(q);
    tilt(law, a, t);
    const int K = law.half;
    std::vector<double> em(K + 1);
    double z = 0.0;
    for (int j = 0; j <= K; ++j) {
        em[j] = std::expm1(-2.0 * j * s);
        z += t.p[j] * (1.0 + em[j]);
    }
    double num = 0.0;
    for (int j = 0; j <= K; ++j)
        for (int k = j + 1; k <= K; ++k) num += 2.0 * (k - j) * t.p[j] * t.p[k] * (em[j] - em[k]);
    return num / z;
}

double cgf_inverse(int q, double y) {
    if (q < 2) throw DomainError("cgf_inverse: q must be at least 2");
    if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("cgf_inverse: target must be positive and finite");
    double lo = -1.0, hi = 1.0;
    while (cgf(q, lo) > y) lo *= 2.0;
    while (cgf(q, hi) < y) hi *= 2.0;
    double theta = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double g = cgf(q, theta) - y;
        if (g == 0.0) return theta;
        if (g < 0.0)
            lo = theta;
        else
            hi = theta;
        const double d = cgf_deriv(q, theta);
        double next = theta - g / d;
        if (!(d > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - theta) <= 1e-15 * std::max(1.0, std::abs(theta))) return next;
        theta = next;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(theta))) return theta;
    }
    return theta;
}

double tilt_for_mean(int q, double x) {
    const TiltedLaw& law = tilted_law(q);
    const double top = 2.0 * law.half;
    if (!(x > 0.0 && x < top)) throw DomainError("tilt_for_mean: x must lie strictly inside (0, 2[q/2])");

    // Bracket: f' is increasing from 0 to 2[q/2].
    double lo = -1.0, hi = 1.0;
    while (cgf_deriv(q, lo) > x) lo *= 2.0;
    while (cgf_deriv(q, hi) < x) hi *= 2.0;

    double theta = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double g = cgf_deriv(q, theta) - x;
        if (g == 0.0) return theta;
        if (g < 0.0)
            lo = theta;
        else
            hi = theta;
        const double d = cgf_deriv2(q, theta);
        double next = theta - g / d;
        if (!(d > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - theta) <= 1e-15 * std::max(1.0, std::abs(theta))) return next;
        theta = next;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(theta))) return theta;
    }
    return theta;
}

namespace {

void check_domain(int q, double x) {
    if (q < 2) throw DomainError("rate: q must be at least 2");
    const double top = 2.0 * (q / 2);
    if (!(x >= 0.0 && x <= top)) throw DomainError("rate: x outside [0, 2[q/2]]");
}

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

}  // namespace

double rate_numeric(int q, double x) {
    check_domain(q, x);
    const double top = 2.0 * (q / 2);
    if (x == 0.0) return 0.0;
    if (x == top) return -log_top_coeff(q);
    const double theta = tilt_for_mean(q, x);
    return theta * x - cgf(q, theta);
}

double rate_closed_form(int q, double x) {
    check_domain(q, x);
    const double top = 2.0 * (q / 2);
    switch (q) {
        case 2:
            return 0.5 * xlogx(x) + 0.5 * xlogx(2.0 - x) - std::log(2.0);
        case 3:
            // (x/2) log(x/(6-3x)) - log(6/(6-3x)), regrouped to stay finite at x = 2.
            return 0.5 * xlogx(x) + (1.0 - 0.5 * x) * (x == 2.0 ? 0.0 : std::log(6.0 - 3.0 * x)) - std::log(6.0);
        case 4:
        case 5: {
            if (x == 0.0) return 0.0;
            if (x == top) return -log_top_coeff(q);
            const double c1 = q == 4 ? 6.0 : 10.0;
            const double c2 = q == 4 ? 3.0 : 15.0;
            // Root of c2(4-x) eta^2 + c1(2-x) eta - x = 0 in the cancellation-free form.
            const double disc = std::sqrt(c1 * c1 * (2.0 - x) * (2.0 - x) + 4.0 * c2 * x * (4.0 - x));
            const double eta = 2.0 * x / (c1 * (2.0 - x) + disc);
            return 0.5 * x * std::log(eta) - std::log(1.0 + c1 * eta + c2 * eta * eta);
        }
        default:
            throw DomainError("rate_closed_form: only q = 2..5 have closed forms");
    }
}

double rate(int q, double x) {
    check_domain(q, x);
    if (q >= 2 && q <= 5) return rate_closed_form(q, x);
    return rate_numeric(q, x);
}

}  // namespace svasym::rate
