#include <doctest.h>

#include "svasym/cli.hpp"
#include "svasym/csv.hpp"
#include "svasym/lyapunov_euler.hpp"
#include "svasym/reproduce.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace svasym;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "svasym");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "svasym_cli_test";
    fs::create_directories(d);
    return d / name;
}

double cell(const std::string& csv_text, std::size_t row, std::size_t col) {
    return std::stod(csv::parse(csv_text).at(row + 1).at(col));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("csv helpers") {
    CHECK(csv::num(0.1 + 0.2) == "0.3");
    CHECK(csv::num(1.0 / 3) == "0.333333333333");
    CHECK(csv::num(0.0) == "0");
    CHECK(csv::num(-INFINITY) == "-inf");
    CHECK(csv::field("a,b") == "\"a,b\"");
    csv::Table t({"x", "y"});
    CHECK_THROWS(t.add({"1"}));
    t.add({"1", "2"});
    t.footer("note");
    CHECK(t.str() == "x,y\n1,2\n# note\n");
    CHECK(csv::parse(t.str()).size() == 2);
}

TEST_CASE("explosion threshold") {
    const Result r = run({"explosion-threshold", "--sigma0", "0.2", "--tau", "0.25", "--n", "80", "--q", "2"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(cell(r.out, 0, 6) - 0.062) < 0.002);
}

TEST_CASE("lyapunov subcommand") {
    Result r = run({"lyapunov", "--scheme", "log-euler-log-euler", "--rho", "0.3", "--beta", "0", "--q", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(cell(r.out, 0, 4) == doctest::Approx(-0.01125).epsilon(1e-12));
    r = run({"lyapunov", "--rho", "0.1", "--beta", "2", "--q", "2"});
    REQUIRE(r.code == 0);
    CHECK(cell(r.out, 0, 4) == doctest::Approx(euler::lyapunov(0.1, 2, 2).value).epsilon(1e-11));
    CHECK(csv::parse(r.out)[1][5] == "stationary");
    // market inputs map through the scaling
    r = run({"lyapunov", "--sigma0", "0.2", "--tau", "0.25", "--n", "80", "--omega", "0.05", "--q", "2"});
    REQUIRE(r.code == 0);
    CHECK(cell(r.out, 0, 1) == doctest::Approx(0.1));
    CHECK(cell(r.out, 0, 2) == doctest::Approx(2.0));
}

TEST_CASE("phase curve footer") {
    const Result r = run({"phase-curve", "--q", "2", "--rho-min", "0.1", "--rho-max", "0.3", "--rho-step", "0.1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# critical_point,rho_c=") != std::string::npos);
    CHECK(csv::parse(r.out).size() == 4);
}

TEST_CASE("config file with flags winning") {
    const fs::path cfg = scratch("limits.json");
    std::ofstream(cfg) << R"({"rho": 0.1, "beta": 1, "abs_variant": false})";
    Result r = run({"limits", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    CHECK(cell(r.out, 1, 4) == doctest::Approx(0.0100666666667));
    r = run({"limits", "--config", cfg.string(), "--beta", "0"});
    REQUIRE(r.code == 0);
    CHECK(cell(r.out, 1, 4) == doctest::Approx(0.01));

    std::ofstream(cfg) << R"({"rho": 0.1, "volatility": 1})";
    r = run({"limits", "--config", cfg.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("volatility") != std::string::npos);
    std::ofstream(cfg) << "{not json";
    CHECK(run({"limits", "--config", cfg.string()}).code == 2);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"reproduce", "fig9"}).code == 2);
    CHECK(run({"lyapunov", "--scheme", "euler-euler", "--rho", "0.1", "--beta", "1", "--q", "2.5"}).code == 2);
    CHECK(run({"lyapunov", "--rho", "-1", "--beta", "1"}).code == 2);
    CHECK(run({"simulate", "--n-paths", "1"}).code == 2);
    CHECK(run({"lyapunov", "--help"}).code == 0);
}

TEST_CASE("every subcommand is byte-identical across runs") {
    const std::vector<std::vector<std::string>> cases = {
        {"lyapunov", "--rho", "0.2", "--beta", "1.5", "--q", "3"},
        {"phase-curve", "--q", "3", "--rho", "0.05", "--rho", "0.15"},
        {"exact-moments", "--q", "2", "--n", "40", "--omega-max", "0.15", "--omega-points", "4"},
        {"simulate", "--scheme", "euler-euler", "--n", "20", "--omega", "0.2", "--n-paths", "2000", "--seed", "3",
         "--antithetic", "--workers", "3"},
        {"limits", "--rho", "0.3", "--beta", "2"},
        {"explosion-threshold", "--sigma0", "0.2", "--tau", "0.25", "--n", "40", "--q", "3"},
        {"reproduce", "fig3"},
    };
    for (const auto& c : cases) {
        CAPTURE(c[0]);
        const fs::path a = scratch(c[0] + "_a.csv"), b = scratch(c[0] + "_b.csv");
        auto ca = c, cb = c;
        ca.insert(ca.end(), {"--out", a.string()});
        cb.insert(cb.end(), {"--out", b.string()});
        REQUIRE(run(ca).code == 0);
        REQUIRE(run(cb).code == 0);
        CHECK(slurp(a) == slurp(b));
        CHECK(!slurp(a).empty());
    }
}

TEST_CASE("simulate writes estimates and path dumps") {
    const fs::path dir = scratch("paths");
    const Result r = run({"simulate", "--n", "10", "--n-paths", "500", "--estimators", "moment,lln", "--dump-paths", "2",
                          "--dump-dir", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = csv::parse(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "moment_q2");
    CHECK(fs::exists(dir / "path_1.csv"));
}

TEST_CASE("table1 parses back into the critical points") {
    const Result r = run({"reproduce", "table1"});
    REQUIRE(r.code == 0);
    const auto rows = csv::parse(r.out);
    REQUIRE(rows.size() == 7);
    for (int q = 2; q <= 7; ++q) {
        const auto cp = euler::critical_point(q);
        CHECK(std::stoi(rows[q - 1][0]) == q);
        CHECK(std::stod(rows[q - 1][1]) == doctest::Approx(cp.first).epsilon(1e-11));
        CHECK(std::stod(rows[q - 1][2]) == doctest::Approx(cp.second).epsilon(1e-11));
    }
}

}
