#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

namespace svasym {

/// Market-level inputs of one discretized run.
///
/// sigma0 and omega are quoted per square-root unit of time, tau is the
/// step length, and n the number of steps. corr only affects simulation.
struct ModelParams {
    double S0 = 1.0;
    double sigma0 = 0.2;
    double omega = 0.0;
    double tau = 0.25;
    int n = 1;
    double corr = 0.0;

    void validate() const;
    double maturity() const { return tau * n; }
};

/// Asymptotic coordinates: rho = sigma0 sqrt(tau), beta = omega^2 n^2 tau / 2.
struct Scaling {
    double rho = 0.1;
    double beta = 0.0;
    double q = 2.0;

    void validate() const;
};

enum class Regime { LargeMaturity, SmallMaturity, FixedMaturity, Other };

std::string_view to_string(Regime r);

Scaling scaling_from_market(const ModelParams& p, double q);

ModelParams market_from_scaling(const Scaling& s, int n, double tau, double S0 = 1.0);

/// Classifies how tau scales with n between two runs sharing (rho, beta).
///
/// tau ~ n^0 is the large-maturity regime, tau ~ n^-1 fixed maturity and
/// tau ~ n^-2 small maturity. Anything else (or runs that do not share the
/// same scaling coordinates) is Other. The result is descriptive only.
Regime classify_regime(const ModelParams& a, const ModelParams& b);

void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);
void to_json(nlohmann::json& j, const Scaling& s);
void from_json(const nlohmann::json& j, Scaling& s);

}  // namespace svasym
