#pragma once

#include "svasym/params.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace svasym {

enum class SchemeKind { EulerLogEuler, LogEulerLogEuler, EulerEuler, LogEulerEuler };

inline constexpr std::array<SchemeKind, 4> kAllSchemes = {SchemeKind::EulerLogEuler, SchemeKind::LogEulerLogEuler,
                                                          SchemeKind::EulerEuler, SchemeKind::LogEulerEuler};

/// "euler-log-euler", "log-euler-log-euler", "euler-euler", "log-euler-euler".
std::string_view to_string(SchemeKind k);
SchemeKind scheme_from_string(std::string_view s);

/// Whether the asset uses the plain Euler update (and may turn negative).
bool euler_asset(SchemeKind k);
/// Whether the volatility uses the plain Euler update.
bool euler_vol(SchemeKind k);

struct PathState {
    double s = 1.0;
    double sigma = 0.2;
    int step_index = 0;
};

/// eps drives the asset, v the volatility. Both are independent standard
/// normals as drawn; correlate() mixes eps into the effective asset noise.
struct NoisePair {
    double eps = 0.0;
    double v = 0.0;
};

/// eps_effective = corr v + sqrt(1 - corr^2) eps.
NoisePair correlate(NoisePair raw, double corr);

/// One step of the scheme with already correlated noise. The asset update
/// uses the pre-update sigma.
PathState step(SchemeKind kind, const PathState& st, const NoisePair& noise, const ModelParams& p);

/// Philox4x32-10 counter-based generator.
class Philox {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter bijection(Counter ctr, Key key);
};

/// The k-th raw noise pair of path i for a seed: a pure function of (seed, i, k).
NoisePair gaussian_pair(std::uint64_t seed, std::uint64_t path_index, std::uint64_t k);

/// Sequential view over gaussian_pair for one path.
class GaussianPairStream {
public:
    GaussianPairStream(std::uint64_t seed, std::uint64_t path_index) : seed_(seed), path_(path_index) {}
    NoisePair next() { return gaussian_pair(seed_, path_, k_++); }
    std::uint64_t position() const { return k_; }

private:
    std::uint64_t seed_;
    std::uint64_t path_;
    std::uint64_t k_ = 0;
};

struct TerminalSample {
    double s = 0.0;
    std::optional<double> log_abs;  // empty when s == 0
    int sign = 0;
};

/// Terminal value of one path. When `antithetic` is set the noise of every
/// step is negated. When `trajectory` is non-null the states (including the
/// initial one) are appended.
TerminalSample simulate_path(SchemeKind kind, const ModelParams& p, std::uint64_t seed, std::uint64_t path_index,
                             bool antithetic = false, std::vector<PathState>* trajectory = nullptr);

/// Terminal samples of paths 0..n_paths-1, independent of worker count.
std::vector<TerminalSample> simulate_terminal(SchemeKind kind, const ModelParams& p, std::uint64_t n_paths,
                                              std::uint64_t seed, int workers = 1);

/// Writes step,s,sigma rows for the given path to `file`.
void dump_path_csv(const std::string& file, SchemeKind kind, const ModelParams& p, std::uint64_t seed,
                   std::uint64_t path_index);

}  // namespace svasym
