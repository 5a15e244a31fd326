#include "svasym/schemes.hpp"

#include "svasym/errors.hpp"
#include "svasym/parallel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "svasym/csv.hpp"

namespace svasym {

std::string_view to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::EulerLogEuler: return "euler-log-euler";
        case SchemeKind::LogEulerLogEuler: return "log-euler-log-euler";
        case SchemeKind::EulerEuler: return "euler-euler";
        case SchemeKind::LogEulerEuler: return "log-euler-euler";
    }
    return "unknown";
}

SchemeKind scheme_from_string(std::string_view s) {
    for (SchemeKind k : kAllSchemes)
        if (to_string(k) == s) return k;
    throw ConfigError("unknown scheme '" + std::string(s) + "'");
}

bool euler_asset(SchemeKind k) { return k == SchemeKind::EulerLogEuler || k == SchemeKind::EulerEuler; }

bool euler_vol(SchemeKind k) { return k == SchemeKind::EulerEuler || k == SchemeKind::LogEulerEuler; }

NoisePair correlate(NoisePair raw, double corr) {
    if (corr == 0.0) return raw;
    return {corr * raw.v + std::sqrt(1.0 - corr * corr) * raw.eps, raw.v};
}

PathState step(SchemeKind kind, const PathState& st, const NoisePair& noise, const ModelParams& p) {
    const double sq = std::sqrt(p.tau);
    PathState next = st;
    const double vol_step = st.sigma * sq;
    if (euler_asset(kind))
        next.s = st.s * (1.0 + vol_step * noise.eps);
    else
        next.s = st.s * std::exp(vol_step * noise.eps - 0.5 * vol_step * vol_step);
    const double w = p.omega * sq;
    if (euler_vol(kind))
        next.sigma = st.sigma * (1.0 + w * noise.v);
    else
        next.sigma = st.sigma * std::exp(w * noise.v - 0.5 * w * w);
    next.step_index = st.step_index + 1;
    return next;
}

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

// Uniform on (0,1) from 64 random bits, 53-bit resolution, never 0 or 1.
inline double to_open_unit(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(a) << 32) | b) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox::Counter Philox::bijection(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, ctr[0], hi0, lo0);
        mulhilo(kM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

NoisePair gaussian_pair(std::uint64_t seed, std::uint64_t path_index, std::uint64_t k) {
    const Philox::Counter ctr = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                                 static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32)};
    const Philox::Key key = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const Philox::Counter r = Philox::bijection(ctr, key);
    const double u1 = to_open_unit(r[0], r[1]);
    const double u2 = to_open_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

TerminalSample simulate_path(SchemeKind kind, const ModelParams& p, std::uint64_t seed, std::uint64_t path_index,
                             bool antithetic, std::vector<PathState>* trajectory) {
    PathState st{p.S0, p.sigma0, 0};
    if (trajectory) trajectory->push_back(st);
    GaussianPairStream stream(seed, path_index);
    for (int k = 0; k < p.n; ++k) {
        NoisePair raw = stream.next();
        if (antithetic) raw = {-raw.eps, -raw.v};
        st = step(kind, st, correlate(raw, p.corr), p);
        if (trajectory) trajectory->push_back(st);
    }
    TerminalSample out;
    out.s = st.s;
    out.sign = st.s > 0.0 ? 1 : (st.s < 0.0 ? -1 : 0);
    if (st.s != 0.0) out.log_abs = std::log(std::abs(st.s));
    return out;
}

std::vector<TerminalSample> simulate_terminal(SchemeKind kind, const ModelParams& p, std::uint64_t n_paths,
                                              std::uint64_t seed, int workers) {
    p.validate();
    if (n_paths < 1) throw DomainError("simulate_terminal: n_paths must be at least 1");
    std::vector<TerminalSample> out(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = simulate_path(kind, p, seed, i);
    });
    return out;
}

void dump_path_csv(const std::string& file, SchemeKind kind, const ModelParams& p, std::uint64_t seed,
                   std::uint64_t path_index) {
    std::vector<PathState> traj;
    traj.reserve(p.n + 1);
    simulate_path(kind, p, seed, path_index, false, &traj);
    std::ofstream os(file, std::ios::binary);
    if (!os) throw ConfigError("cannot open '" + file + "' for writing");
    os << "step,s,sigma\n";
    for (const PathState& st : traj) os << st.step_index << ',' << csv::num(st.s) << ',' << csv::num(st.sigma) << '\n';
}

}  // namespace svasym
