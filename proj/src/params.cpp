#include "svasym/params.hpp"

#include "svasym/errors.hpp"

#include <cmath>

namespace svasym {

void ModelParams::validate() const {
    if (!(S0 > 0.0)) throw DomainError("ModelParams: S0 must be positive");
    if (!(sigma0 > 0.0)) throw DomainError("ModelParams: sigma0 must be positive");
    if (!(omega >= 0.0)) throw DomainError("ModelParams: omega must be nonnegative");
    if (!(tau > 0.0)) throw DomainError("ModelParams: tau must be positive");
    if (n < 1) throw DomainError("ModelParams: n must be at least 1");
    if (!(corr >= -1.0 && corr <= 1.0)) throw DomainError("ModelParams: corr must lie in [-1,1]");
}

void Scaling::validate() const {
    if (!(rho > 0.0)) throw DomainError("Scaling: rho must be positive");
    if (!(beta >= 0.0)) throw DomainError("Scaling: beta must be nonnegative");
    if (!std::isfinite(q)) throw DomainError("Scaling: q must be finite");
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::LargeMaturity: return "large-maturity";
        case Regime::SmallMaturity: return "small-maturity";
        case Regime::FixedMaturity: return "fixed-maturity";
        case Regime::Other: return "other";
    }
    return "other";
}

Scaling scaling_from_market(const ModelParams& p, double q) {
    p.validate();
    Scaling s;
    s.rho = p.sigma0 * std::sqrt(p.tau);
    const double nn = static_cast<double>(p.n);
    s.beta = 0.5 * p.omega * p.omega * nn * nn * p.tau;
    s.q = q;
    return s;
}

ModelParams market_from_scaling(const Scaling& s, int n, double tau, double S0) {
    s.validate();
    if (n < 1) throw DomainError("market_from_scaling: n must be at least 1");
    if (!(tau > 0.0)) throw DomainError("market_from_scaling: tau must be positive");
    ModelParams p;
    p.S0 = S0;
    p.tau = tau;
    p.n = n;
    p.sigma0 = s.rho / std::sqrt(tau);
    const double nn = static_cast<double>(n);
    p.omega = std::sqrt(2.0 * s.beta / (nn * nn * tau));
    p.corr = 0.0;
    p.validate();
    return p;
}

Regime classify_regime(const ModelParams& a, const ModelParams& b) {
    a.validate();
    b.validate();
    if (a.n == b.n) return Regime::Other;
    const Scaling sa = scaling_from_market(a, 2.0);
    const Scaling sb = scaling_from_market(b, 2.0);
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(std::abs(x), std::abs(y)); };
    if (!close(sa.rho, sb.rho) || !close(sa.beta, sb.beta)) return Regime::Other;

    // tau ~ n^-p
    const double p = -std::log(b.tau / a.tau) / std::log(static_cast<double>(b.n) / a.n);
    constexpr double tol = 1e-6;
    if (std::abs(p) < tol) return Regime::LargeMaturity;
    if (std::abs(p - 1.0) < tol) return Regime::FixedMaturity;
    if (std::abs(p - 2.0) < tol) return Regime::SmallMaturity;
    return Regime::Other;
}

void to_json(nlohmann::json& j, const ModelParams& p) {
    j = nlohmann::json{{"S0", p.S0},   {"sigma0", p.sigma0}, {"omega", p.omega},
                       {"tau", p.tau}, {"n", p.n},           {"corr", p.corr}};
}

void from_json(const nlohmann::json& j, ModelParams& p) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "S0" && k != "sigma0" && k != "omega" && k != "tau" && k != "n" && k != "corr")
            throw ConfigError("ModelParams: unknown key '" + k + "'");
    }
    p.S0 = j.value("S0", p.S0);
    p.sigma0 = j.value("sigma0", p.sigma0);
    p.omega = j.value("omega", p.omega);
    p.tau = j.value("tau", p.tau);
    p.n = j.value("n", p.n);
    p.corr = j.value("corr", p.corr);
}

void to_json(nlohmann::json& j, const Scaling& s) {
    j = nlohmann::json{{"rho", s.rho}, {"beta", s.beta}, {"q", s.q}};
}

void from_json(const nlohmann::json& j, Scaling& s) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "rho" && k != "beta" && k != "q") throw ConfigError("Scaling: unknown key '" + k + "'");
    }
    s.rho = j.value("rho", s.rho);
    s.beta = j.value("beta", s.beta);
    s.q = j.value("q", s.q);
}

}  // namespace svasym
