#include "svasym/cli.hpp"

#include "svasym/errors.hpp"
#include "svasym/exact_moments.hpp"
#include "svasym/limit_laws.hpp"
#include "svasym/lyapunov_euler.hpp"
#include "svasym/lyapunov_lognormal.hpp"
#include "svasym/mc_engine.hpp"
#include "svasym/parallel.hpp"
#include "svasym/params.hpp"
#include "svasym/reproduce.hpp"
#include "svasym/schemes.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace svasym::cli {

namespace {

using nlohmann::json;

struct Common {
    std::string config;
    std::string out;
    int workers = 1;
};

void add_common(CLI::App* sub, Common& c, bool with_workers) {
    sub->add_option("--config", c.config, "JSON file with option values; flags win");
    sub->add_option("--out", c.out, "Output file (default: stdout)");
    if (with_workers) sub->add_option("--workers", c.workers, "Worker threads (default: SVASYM_THREADS or 1)");
}

void add_market(CLI::App* sub, ModelParams& p, bool with_corr) {
    sub->add_option("--S0", p.S0, "Initial asset price");
    sub->add_option("--sigma0", p.sigma0, "Initial volatility");
    sub->add_option("--omega", p.omega, "Vol of vol");
    sub->add_option("--tau", p.tau, "Time step");
    sub->add_option("--n", p.n, "Number of steps");
    if (with_corr) sub->add_option("--corr", p.corr, "Correlation between asset and volatility noise");
}

std::string json_scalar(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw ConfigError("config key '" + key + "' has an unsupported value type");
}

// Fills options that were not given on the command line from a flat JSON object.
void apply_config(CLI::App* sub, const std::string& file) {
    std::ifstream is(file);
    if (!is) throw ConfigError("cannot open config '" + file + "'");
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + file + "': " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config '" + file + "' must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        std::string name = key;
        for (char& ch : name)
            if (ch == '_') ch = '-';
        CLI::Option* opt = name == "config" ? nullptr : sub->get_option_no_throw("--" + name);
        if (!opt) throw ConfigError("unknown config key '" + key + "' for " + sub->get_name());
        if (opt->count() > 0) continue;
        if (value.is_array()) {
            for (const json& v : value) opt->add_result(json_scalar(v, key));
        } else {
            opt->add_result(json_scalar(value, key));
        }
        opt->run_callback();
    }
}

bool given(CLI::App* sub, const std::string& name) { return sub->get_option("--" + name)->count() > 0; }

void emit(const csv::Table& t, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        t.write(out);
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw ConfigError("cannot open '" + out_path + "' for writing");
    t.write(os);
}

std::vector<double> uniform_grid(double lo, double hi, int count) {
    if (count < 2 || !(hi > lo)) throw ConfigError("grid needs hi > lo and at least two points");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
    return g;
}

std::string join(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + csv::num(xs[i]);
    return s;
}

int checked_int_q(double q) {
    if (q != std::floor(q) || q < 2.0) throw ConfigError("Euler asset schemes need an integer q >= 2");
    return static_cast<int>(q);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Moment Lyapunov exponents, phase transitions and limit laws of discretized stochastic volatility"};
    app.name("svasym");
    app.require_subcommand(1);

    Common common;
    ModelParams market;
    std::string scheme = "euler-log-euler";
    double rho = 0.1, beta = 0.0, q = 2.0;
    std::vector<std::pair<CLI::App*, std::function<csv::Table(CLI::App*)>>> subs;

    // lyapunov
    {
        auto* sub = app.add_subcommand("lyapunov", "Moment Lyapunov exponent with branch diagnostics");
        add_common(sub, common, false);
        sub->add_option("--scheme", scheme, "Discretization scheme");
        sub->add_option("--rho", rho, "Per-step volatility sigma0 sqrt(tau)");
        sub->add_option("--beta", beta, "Accumulated vol of vol omega^2 n^2 tau / 2");
        sub->add_option("--q", q, "Moment order");
        add_market(sub, market, false);
        subs.emplace_back(sub, [&](CLI::App* s) {
            const SchemeKind kind = scheme_from_string(scheme);
            if (!given(s, "rho") && !given(s, "beta")) {
                market.validate();
                const Scaling sc = scaling_from_market(market, q);
                rho = sc.rho;
                beta = sc.beta;
            }
            csv::Table t({"scheme", "rho", "beta", "q", "lambda", "branch", "h1", "d_star", "stationary_h1", "lower",
                          "upper"});
            const std::string name(to_string(kind));
            if (euler_asset(kind)) {
                const int qi = checked_int_q(q);
                const euler::LyapunovResult r = euler::lyapunov(rho, beta, qi);
                const euler::Bounds b = euler::bounds_and_asymptotics(rho, beta, qi);
                t.add({name, csv::num(rho), csv::num(beta), csv::num(q), csv::num(r.value),
                       std::string(euler::to_string(r.branch)), csv::num(r.h1), csv::num(r.d_star),
                       join(r.all_stationary_h1), csv::num(b.lower), csv::num(b.upper)});
            } else {
                const lognormal::LnExponent e = lognormal::lyapunov_ln(rho, beta, q);
                t.add({name, csv::num(rho), csv::num(beta), csv::num(q), e.infinite ? "inf" : csv::num(e.value),
                       e.infinite ? "infinite" : "closed_form", "", "", "", "", ""});
            }
            return t;
        });
    }

    // phase-curve
    std::vector<double> rho_list;
    double rho_min = 0.01, rho_max = 0.5, rho_step = 0.01;
    int q_int = 2;
    {
        auto* sub = app.add_subcommand("phase-curve", "Transition curve beta_cr(rho) and its critical point");
        add_common(sub, common, true);
        sub->add_option("--q", q_int, "Moment order (>= 2)");
        sub->add_option("--rho", rho_list, "Explicit rho grid");
        sub->add_option("--rho-min", rho_min, "Grid start");
        sub->add_option("--rho-max", rho_max, "Grid end");
        sub->add_option("--rho-step", rho_step, "Grid step");
        subs.emplace_back(sub, [&](CLI::App*) {
            std::vector<double> g = rho_list;
            if (g.empty()) {
                if (!(rho_step > 0.0) || !(rho_max >= rho_min) || !(rho_min > 0.0))
                    throw ConfigError("phase-curve: invalid rho grid");
                const int count = static_cast<int>(std::floor((rho_max - rho_min) / rho_step + 1e-9)) + 1;
                for (int i = 0; i < count; ++i) g.push_back(rho_min + i * rho_step);
            }
            const euler::PhaseCurve pc = euler::phase_curve(q_int, g, common.workers);
            const bool mf = q_int == 2 || q_int == 3;
            csv::Table t({"rho", "beta_cr", "beta_cr_meanfield"});
            const double mf_rc = mf ? euler::meanfield_critical_point(q_int).first : 0.0;
            for (const auto& [r, b] : pc.samples)
                t.add({csv::num(r), csv::num(b), mf && r < mf_rc ? csv::num(euler::meanfield_phase(q_int, r)) : ""});
            t.footer("critical_point,rho_c=" + csv::num(pc.critical_point.first) +
                     ",beta_c=" + csv::num(pc.critical_point.second));
            return t;
        });
    }

    // exact-moments
    std::vector<double> omega_list;
    double omega_max = 0.1;
    int omega_points = 11;
    {
        auto* sub = app.add_subcommand("exact-moments", "Exact finite-n moments and log-normal equivalent volatility");
        add_common(sub, common, false);
        sub->add_option("--q", q_int, "Moment order (>= 1)");
        add_market(sub, market, false);
        sub->add_option("--omegas", omega_list, "Explicit vol-of-vol grid (overrides --omega)");
        sub->add_option("--omega-max", omega_max, "Sweep end when no explicit grid is given");
        sub->add_option("--omega-points", omega_points, "Sweep size when no explicit grid is given");
        subs.emplace_back(sub, [&](CLI::App* s) {
            std::vector<double> g = omega_list;
            if (g.empty()) g = given(s, "omega") ? std::vector<double>{market.omega} : uniform_grid(0.0, omega_max, omega_points);
            market.validate();
            return exact::moment_sweep(q_int, market, g);
        });
    }

    // simulate
    mc::McConfig mcfg;
    std::vector<std::string> estimators{"moment", "lln", "clt"};
    std::string dump_dir;
    int dump_count = 0;
    bool abs_variant = false;
    {
        auto* sub = app.add_subcommand("simulate", "Monte Carlo estimates");
        add_common(sub, common, true);
        sub->add_option("--scheme", scheme, "Discretization scheme");
        add_market(sub, market, true);
        sub->add_option("--q", q, "Moment order for the moment estimator");
        sub->add_option("--n-paths", mcfg.n_paths, "Number of paths");
        sub->add_option("--seed", mcfg.seed, "RNG seed");
        sub->add_flag("--antithetic", mcfg.antithetic, "Antithetic pairing of both noise streams");
        sub->add_option("--estimators", estimators, "Subset of moment, lln, clt")->delimiter(',');
        sub->add_option("--dump-paths", dump_count, "Write the first N path trajectories as CSV");
        sub->add_option("--dump-dir", dump_dir, "Directory for --dump-paths files (default: current directory)");
        subs.emplace_back(sub, [&](CLI::App*) {
            const SchemeKind kind = scheme_from_string(scheme);
            market.validate();
            mcfg.workers = common.workers;
            mcfg.validate();
            mc::EstimateTable t;
            const double r = market.sigma0 * std::sqrt(market.tau);
            for (const std::string& e : estimators) {
                if (e == "moment") {
                    std::ostringstream label;
                    label << "moment_q" << csv::num(q);
                    t.add(label.str(), mc::estimate_moment(kind, q, market, mcfg), mcfg);
                } else if (e == "lln") {
                    t.add("lln", mc::estimate_lln(kind, market, mcfg), mcfg);
                } else if (e == "clt") {
                    const double slope = euler_asset(kind) ? limits::lln_euler(r) : limits::lln_lognormal(r);
                    t.add("clt_variance", mc::estimate_clt_variance(kind, market, mcfg, slope), mcfg);
                } else {
                    throw ConfigError("unknown estimator '" + e + "'");
                }
            }
            if (dump_count > 0) {
                const std::filesystem::path dir = dump_dir.empty() ? "." : dump_dir;
                std::filesystem::create_directories(dir);
                for (int i = 0; i < dump_count; ++i)
                    dump_path_csv((dir / ("path_" + std::to_string(i) + ".csv")).string(), kind, market, mcfg.seed, i);
            }
            return t.table();
        });
    }

    // limits
    {
        auto* sub = app.add_subcommand("limits", "Law of large numbers slopes and CLT variances");
        add_common(sub, common, false);
        sub->add_option("--rho", rho, "Per-step volatility");
        sub->add_option("--beta", beta, "Accumulated vol of vol");
        sub->add_flag("--abs-variant", abs_variant, "Use Var[|1+rho eps|] in the Euler volatility CLT variance");
        subs.emplace_back(sub, [&](CLI::App*) {
            csv::Table t({"family", "rho", "beta", "lln_slope", "clt_variance", "clt_variance_alt"});
            const limits::LimitConstants e = limits::constants(limits::Family::EulerAsset, rho, beta, abs_variant);
            const double alt = limits::clt_variance_euler(rho, beta, !abs_variant);
            t.add({"euler-asset", csv::num(rho), csv::num(beta), csv::num(e.lln_slope), csv::num(e.clt_variance),
                   csv::num(alt)});
            const limits::LimitConstants l = limits::constants(limits::Family::LogEulerAsset, rho, beta);
            t.add({"log-euler-asset", csv::num(rho), csv::num(beta), csv::num(l.lln_slope), csv::num(l.clt_variance), ""});
            return t;
        });
    }

    // explosion-threshold
    {
        auto* sub = app.add_subcommand("explosion-threshold", "Vol of vol at which moments explode");
        add_common(sub, common, false);
        add_market(sub, market, false);
        sub->add_option("--q", q_int, "Moment order (>= 2)");
        subs.emplace_back(sub, [&](CLI::App*) {
            const double r = market.sigma0 * std::sqrt(market.tau);
            const double w = euler::explosion_threshold(market.sigma0, market.tau, market.n, q_int);
            csv::Table t({"sigma0", "tau", "n", "q", "rho", "beta_cr", "omega_cr"});
            t.add({csv::num(market.sigma0), csv::num(market.tau), std::to_string(market.n), std::to_string(q_int),
                   csv::num(r), csv::num(0.5 * w * w * market.n * market.n * market.tau), csv::num(w)});
            return t;
        });
    }

    // reproduce
    std::string target;
    std::string out_dir;
    {
        auto* sub = app.add_subcommand("reproduce", "Data series behind a figure or table (or 'all')");
        add_common(sub, common, true);
        sub->add_option("target,--target", target, "fig1..fig6, table1, expint or all");
        sub->add_option("--out-dir", out_dir, "Directory for 'all' (one <target>.csv per target)");
        subs.emplace_back(sub, [&](CLI::App*) {
            if (target.empty()) throw ConfigError("reproduce: missing target");
            if (target != "all") return reproduce(target, common.workers);
            if (out_dir.empty()) throw ConfigError("reproduce all: --out-dir is required");
            std::filesystem::create_directories(out_dir);
            csv::Table index({"target", "file", "rows"});
            for (const std::string& id : reproduce_targets()) {
                const csv::Table t = reproduce(id, common.workers);
                const std::string file = (std::filesystem::path(out_dir) / (id + ".csv")).string();
                emit(t, file, out);
                index.add({id, file, std::to_string(t.rows().size())});
            }
            return index;
        });
    }

    common.workers = workers_from_env(1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        for (auto& [sub, fn] : subs) {
            if (!sub->parsed()) continue;
            if (!common.config.empty()) apply_config(sub, common.config);
            if (common.workers < 1) throw ConfigError("--workers must be at least 1");
            emit(fn(sub), common.out, out);
            return 0;
        }
        throw ConfigError("no subcommand given");
    } catch (const CLI::ParseError& e) {
        err << "svasym: config: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "svasym: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "svasym: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const NoTransition& e) {
        err << "svasym: " << e.what() << '\n';
        return 2;
    } catch (const NonConvergent& e) {
        err << "svasym: numerical non-convergence: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "svasym: error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace svasym::cli
