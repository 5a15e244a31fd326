#include "svasym/exact_moments.hpp"

#include "svasym/errors.hpp"
#include "svasym/lyapunov_euler.hpp"
#include "svasym/rate_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace svasym::exact {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum_i sign_i e^{x_i}) accumulated as (log magnitude, sign).
class SignedLogSum {
public:
    void add(double log_mag, int sign) {
        if (sign == 0 || log_mag == kNegInf) return;
        terms_.push_back({log_mag, sign});
    }
    LogCoeff value() const {
        if (terms_.empty()) return {kNegInf, 0};
        double m = kNegInf;
        for (const auto& t : terms_) m = std::max(m, t.log_mag);
        double s = 0.0;
        for (const auto& t : terms_) s += t.sign * std::exp(t.log_mag - m);
        if (s == 0.0) return {kNegInf, 0};
        return {m + std::log(std::abs(s)), s > 0 ? 1 : -1};
    }
    void clear() { terms_.clear(); }

private:
    std::vector<LogCoeff> terms_;
};

void check_inputs(int q, const ModelParams& p) {
    p.validate();
    if (q < 1) throw DomainError("exact moments: q must be at least 1");
}

// log a_m = log c_m + 2m log rho.
std::vector<double> log_alpha(int q, double rho) {
    const auto& law = rate::tilted_law(q);
    std::vector<double> out(law.half + 1);
    for (int m = 0; m <= law.half; ++m) out[m] = law.log_coeff[m] + 2.0 * m * std::log(rho);
    return out;
}

}  // namespace

MomentTable moment_dp(int q, const ModelParams& p) {
    check_inputs(q, p);
    const int K = q / 2;
    const long long width = static_cast<long long>(K) * p.n + 1;
    if (width > kLayerGuard)
        throw CapacityExceeded("moment_dp: layer of " + std::to_string(width) + " coefficients exceeds guard");

    const double rho = p.sigma0 * std::sqrt(p.tau);
    const double w2 = p.omega * p.omega;
    const std::vector<double> la = log_alpha(q, rho);

    // Layer i holds W_i(z) = sum_j w_j e^{2 j omega z}; W_n = 1.
    std::vector<LogCoeff> layer{{0.0, 1}};
    std::vector<LogCoeff> next;
    SignedLogSum acc;
    for (int i = p.n - 1; i >= 0; --i) {
        // E[e^{c omega Z_{i+1}} | Z_i = z] = e^{c omega z + c^2 omega^2 tau / 2}, c = 2j.
        for (std::size_t j = 0; j < layer.size(); ++j) {
            const double c = 2.0 * static_cast<double>(j);
            if (layer[j].sign != 0) layer[j].log_mag += 0.5 * c * c * w2 * p.tau;
        }
        // Multiply by sum_m a_m e^{2 m omega z - m omega^2 t_i}.
        const double t_i = i * p.tau;
        next.assign(layer.size() + K, {kNegInf, 0});
        for (std::size_t jn = 0; jn < next.size(); ++jn) {
            acc.clear();
            for (int m = 0; m <= K; ++m) {
                if (static_cast<long long>(jn) - m < 0 || jn - m >= layer.size()) continue;
                const LogCoeff& src = layer[jn - m];
                acc.add(src.log_mag + la[m] - m * w2 * t_i, src.sign);
            }
            next[jn] = acc.value();
        }
        layer.swap(next);
    }
    // Z_0 = 0: sum all coefficients.
    acc.clear();
    for (const LogCoeff& c : layer) acc.add(c.log_mag, c.sign);
    const LogCoeff total = acc.value();
    if (total.sign <= 0) throw NonConvergent("moment_dp: nonpositive moment");
    return {total.log_mag, q, p.n, p};
}

double moment_bruteforce(int q, const ModelParams& p) {
    check_inputs(q, p);
    if (p.n > 8 || q > 6) throw CapacityExceeded("moment_bruteforce: limited to n <= 8 and q <= 6");
    const int K = q / 2;
    const double rho = p.sigma0 * std::sqrt(p.tau);
    const double w2 = p.omega * p.omega;
    const std::vector<double> la = log_alpha(q, rho);

    std::vector<int> m(p.n, 0);
    std::vector<double> logs;
    while (true) {
        double term = 0.0;
        for (int k = 0; k < p.n; ++k) term += la[m[k]] - m[k] * w2 * k * p.tau;
        // sum_k 2 m_k omega Z_k = sum_j c_j omega dZ_j with c_j = sum_{k > j} 2 m_k.
        double quad = 0.0;
        for (int j = 0; j < p.n; ++j) {
            double c = 0.0;
            for (int k = j + 1; k < p.n; ++k) c += 2.0 * m[k];
            quad += c * c;
        }
        logs.push_back(term + 0.5 * w2 * p.tau * quad);

        int pos = 0;
        while (pos < p.n && m[pos] == K) m[pos++] = 0;
        if (pos == p.n) break;
        ++m[pos];
    }
    const double mx = *std::max_element(logs.begin(), logs.end());
    double s = 0.0;
    for (double l : logs) s += std::exp(l - mx);
    return mx + std::log(s);
}

double finite_lyapunov(int q, const ModelParams& p) { return moment_dp(q, p).log_moment / p.n; }

double ln_equiv_vol(int q, const ModelParams& p) {
    if (q < 2) throw DomainError("ln_equiv_vol: q must be at least 2");
    const double lm = moment_dp(q, p).log_moment;
    return std::sqrt(std::max(0.0, 2.0 * lm / (q * (q - 1.0) * p.maturity())));
}

double ln_equiv_vol_proxy(int q, const ModelParams& p) {
    if (q < 2) throw DomainError("ln_equiv_vol_proxy: q must be at least 2");
    const Scaling s = scaling_from_market(p, q);
    const double lam = euler::lyapunov(s.rho, s.beta, q).value;
    return std::sqrt(std::max(0.0, 2.0 * lam / (q * (q - 1.0) * p.tau)));
}

csv::Table moment_sweep(int q, const ModelParams& base, const std::vector<double>& omegas) {
    csv::Table t({"q", "n", "omega", "sigma0", "tau", "rho", "beta", "log_moment", "lambda_qn", "sigma_ln"});
    for (double om : omegas) {
        ModelParams p = base;
        p.omega = om;
        const MomentTable mt = moment_dp(q, p);
        const Scaling s = scaling_from_market(p, q);
        const double sig = q >= 2 ? std::sqrt(std::max(0.0, 2.0 * mt.log_moment / (q * (q - 1.0) * p.maturity())))
                                  : std::numeric_limits<double>::quiet_NaN();
        t.add({std::to_string(q), std::to_string(p.n), csv::num(om), csv::num(p.sigma0), csv::num(p.tau),
               csv::num(s.rho), csv::num(s.beta), csv::num(mt.log_moment), csv::num(mt.log_moment / p.n),
               csv::num(sig)});
    }
    return t;
}

}  // namespace svasym::exact
