#include "svasym/mc_engine.hpp"

#include "svasym/errors.hpp"
#include "svasym/numerics.hpp"
#include "svasym/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace svasym::mc {

namespace {

using numerics::CompensatedSum;

// log of the largest magnitude handled directly.
constexpr double kLogGuard = 690.0;  // e^690 ~ 1e300

// Per-unit statistic: one value per path, or per antithetic pair.
using PathStat = std::function<std::optional<double>(const TerminalSample&)>;

struct Samples {
    std::vector<double> values;
    std::uint64_t excluded = 0;
};

// Terminal states of every path (and its antithetic partner when requested).
struct Terminals {
    std::vector<TerminalSample> plain;
    std::vector<TerminalSample> mirror;
};

Terminals run_paths(SchemeKind kind, const ModelParams& p, const McConfig& cfg) {
    cfg.validate();
    p.validate();
    const std::uint64_t units = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    Terminals t;
    t.plain.resize(units);
    if (cfg.antithetic) t.mirror.resize(units);
    parallel_for(units, cfg.workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            t.plain[i] = simulate_path(kind, p, cfg.seed, i, false);
            if (cfg.antithetic) t.mirror[i] = simulate_path(kind, p, cfg.seed, i, true);
        }
    });
    return t;
}

Samples reduce(const Terminals& t, const PathStat& stat) {
    Samples s;
    s.values.reserve(t.plain.size());
    for (std::size_t i = 0; i < t.plain.size(); ++i) {
        const auto x = stat(t.plain[i]);
        if (t.mirror.empty()) {
            if (x)
                s.values.push_back(*x);
            else
                ++s.excluded;
            continue;
        }
        const auto y = stat(t.mirror[i]);
        if (x && y)
            s.values.push_back(0.5 * (*x + *y));
        else
            ++s.excluded;
    }
    return s;
}

Samples collect(SchemeKind kind, const ModelParams& p, const McConfig& cfg, const PathStat& stat) {
    return reduce(run_paths(kind, p, cfg), stat);
}

struct Moments {
    double mean;
    double var;  // unbiased sample variance
    std::uint64_t n;
};

// Mean and variance by block-wise compensated sums merged in block order.
Moments moments_of(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 2) throw DomainError("Monte Carlo: fewer than two usable samples");
    const std::size_t B = std::min<std::size_t>(kBlocks, n);
    CompensatedSum total;
    for (std::size_t b = 0; b < B; ++b) {
        CompensatedSum blk;
        for (std::size_t i = b * n / B; i < (b + 1) * n / B; ++i) blk.add(v[i]);
        total.merge(blk);
    }
    const double mean = total.value() / n;
    CompensatedSum sq;
    for (std::size_t b = 0; b < B; ++b) {
        CompensatedSum blk;
        for (std::size_t i = b * n / B; i < (b + 1) * n / B; ++i) blk.add((v[i] - mean) * (v[i] - mean));
        sq.merge(blk);
    }
    return {mean, sq.value() / (n - 1), n};
}

bool tail_dominated(const std::vector<double>& v) {
    if (v.size() <= 10) return false;
    std::vector<double> a(v.size());
    std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
    std::nth_element(a.begin(), a.begin() + 10, a.end(), std::greater<double>());
    CompensatedSum top, all;
    for (std::size_t i = 0; i < 10; ++i) top.add(a[i]);
    for (double x : a) all.add(x);
    return top.value() > 0.5 * all.value();
}

Estimate plain_estimate(const Samples& s) {
    const Moments m = moments_of(s.values);
    Estimate e;
    e.mean = m.mean;
    e.std_error = std::sqrt(m.var / m.n);
    e.n_eff = m.n;
    e.excluded = s.excluded;
    return e;
}

}  // namespace

void McConfig::validate() const {
    if (n_paths < 2) throw DomainError("McConfig: n_paths must be at least 2");
    if (antithetic && n_paths < 4) throw DomainError("McConfig: antithetic runs need at least 4 paths");
    if (workers < 1) throw DomainError("McConfig: workers must be at least 1");
}

Estimate estimate_moment(SchemeKind kind, double q, const ModelParams& p, const McConfig& cfg) {
    const bool integer_q = std::floor(q) == q;
    if (euler_asset(kind) && !(integer_q && q >= 0.0))
        throw DomainError("estimate_moment: Euler asset updates need a nonnegative integer q");

    const Terminals paths = run_paths(kind, p, cfg);
    // q log|S| beyond the guard switches to log space.
    double top = -std::numeric_limits<double>::infinity();
    for (const auto* set : {&paths.plain, &paths.mirror})
        for (const TerminalSample& t : *set)
            if (t.log_abs) top = std::max(top, q * *t.log_abs);
    const double shift = top > kLogGuard ? top : 0.0;
    const int qi = integer_q ? static_cast<int>(std::fmod(std::abs(q), 2.0)) : 0;

    const Samples vals = reduce(paths, [q, qi, shift](const TerminalSample& t) -> std::optional<double> {
        if (t.s == 0.0) return q == 0.0 ? 1.0 : 0.0;
        const double mag = std::exp(q * *t.log_abs - shift);
        return (t.sign < 0 && qi == 1) ? -mag : mag;
    });
    Estimate e = plain_estimate(vals);
    e.tail_warning = tail_dominated(vals.values);
    if (shift > 0.0) {
        if (!(e.mean > 0.0)) throw Overflow("estimate_moment: log-space mean is not positive");
        e.log_space = true;
        e.std_error = e.std_error / e.mean;
        e.mean = shift + std::log(e.mean);
    }
    return e;
}

Estimate estimate_lln(SchemeKind kind, const ModelParams& p, const McConfig& cfg) {
    const double n = p.n;
    const Samples s = collect(kind, p, cfg, [n](const TerminalSample& t) -> std::optional<double> {
        if (!t.log_abs) return std::nullopt;
        return *t.log_abs / n;
    });
    return plain_estimate(s);
}

Estimate estimate_clt_variance(SchemeKind kind, const ModelParams& p, const McConfig& cfg, double slope) {
    const double n = p.n;
    const double rn = std::sqrt(n);
    const Samples s = collect(kind, p, cfg, [n, rn, slope](const TerminalSample& t) -> std::optional<double> {
        if (!t.log_abs) return std::nullopt;
        return (*t.log_abs - slope * n) / rn;
    });
    const std::vector<double>& v = s.values;
    const Moments all = moments_of(v);
    const std::size_t N = v.size();
    const std::size_t B = std::min<std::size_t>(kBlocks, N / 2);
    if (B < 2) throw DomainError("estimate_clt_variance: too few samples for the jackknife");

    // Leave-one-block-out variances from block sums of centered values.
    std::vector<double> s1(B), s2(B);
    std::vector<std::size_t> cnt(B);
    CompensatedSum t1, t2;
    for (std::size_t b = 0; b < B; ++b) {
        CompensatedSum a1, a2;
        for (std::size_t i = b * N / B; i < (b + 1) * N / B; ++i) {
            const double d = v[i] - all.mean;
            a1.add(d);
            a2.add(d * d);
        }
        s1[b] = a1.value();
        s2[b] = a2.value();
        cnt[b] = (b + 1) * N / B - b * N / B;
        t1.merge(a1);
        t2.merge(a2);
    }
    std::vector<double> loo(B);
    CompensatedSum loo_sum;
    for (std::size_t b = 0; b < B; ++b) {
        const double m = static_cast<double>(N - cnt[b]);
        const double r1 = t1.value() - s1[b];
        const double r2 = t2.value() - s2[b];
        loo[b] = (r2 - r1 * r1 / m) / (m - 1.0);
        loo_sum.add(loo[b]);
    }
    const double loo_mean = loo_sum.value() / B;
    CompensatedSum dev;
    for (double x : loo) dev.add((x - loo_mean) * (x - loo_mean));

    Estimate e;
    e.mean = all.var;
    e.std_error = std::sqrt((B - 1.0) / B * dev.value());
    e.n_eff = N;
    e.excluded = s.excluded;
    return e;
}

void EstimateTable::add(const std::string& name, const Estimate& e, const McConfig& cfg) {
    table_.add({name, csv::num(e.mean), csv::num(e.std_error), std::to_string(cfg.n_paths), std::to_string(cfg.seed)});
}

}  // namespace svasym::mc
