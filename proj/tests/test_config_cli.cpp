#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pmelab/cli.hpp"
#include "pmelab/config.hpp"

using namespace pmelab;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "pmelab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("pmelab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("format_double is the shortest round-trip text") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-9) == "1e-09");
    CHECK(format_double(-2.5) == "-2.5");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("format_number keeps 17 significant digits") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("config defaults and round trip") {
    for (const auto& name : experiment_names()) {
        const ScenarioConfig c = default_config(name);
        CHECK(parse_config(emit_config(c)) == c);
    }
    CHECK(default_config("theorem2").initial.kind == "plateau");
    CHECK(default_config("theorem2").log_r_min == -200.0);
    CHECK(default_config("theorem1").initial.kind == "bump");
    CHECK_THROWS_AS(default_config("theorem9"), ConfigError);
}

TEST_CASE("config round trip with every field changed") {
    ScenarioConfig c;
    c.id = "custom_run";
    c.m = 2.5;
    c.N = 5;
    c.initial.kind = "custom";
    c.initial.r = {0.5, 1.0, 1.5};
    c.initial.u = {0.5, 1.0, 0.0};
    c.log_r_min = -12.0;
    c.log_r_max = 3.0;
    c.n = 777;
    c.t_start = 0.1;
    c.t_end = 12.5;
    c.per_decade = 7;
    c.cfl = 0.45;
    c.inner = BoundaryCondition::dirichlet(0.3);
    c.leakage_threshold = 1e-3;
    c.experiments = {"theorem1", "decay"};
    c.output_dir = "out/dir";
    c.theorem1.p_list = {1.0, 1.5, 3.0};
    c.theorem1.factor = 2.0;
    c.theorem1b.resolution = 1e-5;
    c.theorem2.R = 4.0;
    c.theorem3.region_exponent = 0.3;
    c.decay.band = 0.2;
    c.viscosity.lambdas = {5.0, 50.0};
    c.viscosity.window = LineGrid{-1.0, 4.0, 300};
    c.entropy.C = 2.0;
    const std::string text = emit_config(c);
    CHECK(parse_config(text) == c);
    CHECK(emit_config(parse_config(text)) == text);

    const Scenario sc = c.scenario();
    CHECK(sc.id == "custom_run");
    CHECK(sc.params.N == 5);
    CHECK(sc.grid.n == 777);
    CHECK(std::log(sc.grid.r_min) == Approx(-12.0));
    CHECK(sc.times.front() == Approx(0.1));
    CHECK(sc.times.back() == 12.5);
    CHECK(sc.ic.kind() == InitialCondition::Kind::Custom);
    CHECK(sc.inner == BoundaryCondition::dirichlet(0.3));
}

TEST_CASE("config parser accepts comments and whitespace") {
    const auto c = parse_config(
        "# a comment\n"
        "; another\n"
        "[scenario]\n"
        "  m = 2   \n"
        "N=4\r\n"
        "\n"
        "[grid]\n"
        "n = 100\n"
        "[run]\n"
        "outer = dirichlet:0.5\n");
    CHECK(c.m == 2.0);
    CHECK(c.N == 4);
    CHECK(c.n == 100);
    CHECK(c.outer == BoundaryCondition::dirichlet(0.5));
}

TEST_CASE("config errors name the field") {
    auto field_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("no error");
    };
    CHECK(field_of("[grid]\nbogus = 1\n") == "grid.bogus");
    CHECK(field_of("[nowhere]\nx = 1\n") == "nowhere");
    CHECK(field_of("[scenario]\nm = abc\n") == "scenario.m");
    CHECK(field_of("[scenario]\nm = 1\n") == "scenario.m");
    CHECK(field_of("[scenario]\nN = 2\n") == "scenario.N");
    CHECK(field_of("[grid]\nn = -3\n") == "grid.n");
    CHECK(field_of("[run]\ncfl = 2\n") == "run.cfl");
    CHECK(field_of("[run]\ninner = wall\n") == "run.inner");
    CHECK(field_of("[scenario]\nexperiments = theorem1, nope\n") == "scenario.experiments");
    CHECK(field_of("[theorem1]\np_list = 1, 0.5\n") == "theorem1.p_list");
    CHECK(field_of("[scenario]\nm 3\n") != "no error");
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("report CSV layout") {
    ExperimentReport r;
    r.add(2.0, "b", 1.5);
    r.add(1.0, "b", 0.1);
    r.add(2.0, "a", -3.0);
    r.add(1.0, "a", 1.0 / 3.0);
    CHECK(format_report_csv(r) ==
          "time,functional,value\n"
          "1,a,0.33333333333333331\n"
          "1,b,0.10000000000000001\n"
          "2,a,-3\n"
          "2,b,1.5\n");
    const auto dir = scratch("csv");
    emit_csv(r, (dir / "r.csv").string());
    CHECK(slurp(dir / "r.csv") == format_report_csv(r));
    emit_csv(r, (dir / "new" / "r.csv").string());  // parents are created
    CHECK(fs::exists(dir / "new" / "r.csv"));
    CHECK_THROWS_AS(emit_csv(r, (dir / "r.csv" / "x.csv").string()), std::runtime_error);
}

TEST_CASE("worker_count honours PMELAB_THREADS") {
    setenv("PMELAB_THREADS", "3", 1);
    CHECK(worker_count(10) == 3);
    CHECK(worker_count(2) == 2);
    setenv("PMELAB_THREADS", "zero", 1);
    CHECK_THROWS_AS(worker_count(4), ConfigError);
    unsetenv("PMELAB_THREADS");
    CHECK(worker_count(1) == 1);
    CHECK(worker_count(100) >= 1);
}

TEST_CASE("cli usage errors exit with 2") {
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"profiles", "--kind", "F"}).code == 2);  // missing --k
    CHECK(cli({"profiles", "--kind", "Q", "--k", "1"}).code == 2);
    CHECK(cli({"profiles", "--kind", "F", "--k", "1", "--m", "1"}).code == 2);
    const auto r = cli({"experiment", "nope"});
    CHECK(r.code == 2);
    CHECK(r.err.find("nope") != std::string::npos);
}

TEST_CASE("cli profiles and riemann write CSV to stdout") {
    const auto p = cli({"profiles", "--kind", "EK", "--K", "1", "--m", "2", "--N", "3", "--n", "5"});
    REQUIRE(p.code == 0);
    std::istringstream in(p.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "r,EK");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 5);

    const auto r = cli({"riemann", "--m", "2", "--wl", "1", "--wr", "0", "--tau", "1", "--s-min", "-1", "--s-max",
                        "3", "--n", "5"});
    REQUIRE(r.code == 0);
    CHECK(r.out ==
          "s,w\n"
          "-1,1\n"
          "0,1\n"
          "1,0\n"
          "2,0\n"
          "3,0\n");
}

TEST_CASE("cli experiment writes a CSV per name and reports failure with exit 1") {
    const auto dir = scratch("exp");
    std::ofstream(dir / "c.cfg") << "[grid]\nn = 128\n[run]\nt_end = 10\n[theorem1]\nt_to = 10\n";
    const auto bad = cli({"experiment", "theorem3", "--config", (dir / "c.cfg").string(), "--out", dir.string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("theorem3.t_to") != std::string::npos);
    const auto r = cli({"experiment", "theorem1", "entropy", "--config", (dir / "c.cfg").string(), "--out",
                        dir.string()});
    CHECK(r.code == 1);  // the theorem1 trend cannot pass by t = 10
    CHECK(fs::exists(dir / "theorem1.csv"));
    CHECK(fs::exists(dir / "entropy.csv"));
    CHECK(r.out.find("PASS entropy_estimate") != std::string::npos);
    CHECK(r.out.find("FAIL theorem1_trend") != std::string::npos);
    CHECK(slurp(dir / "theorem1.csv").rfind("time,functional,value\n", 0) == 0);
}

TEST_CASE("cli simulate writes snapshots") {
    const auto dir = scratch("sim");
    std::ofstream(dir / "c.cfg") << "[grid]\nn = 64\n[run]\nt_end = 2\nper_decade = 2\n";
    const auto r = cli({"simulate", "--config", (dir / "c.cfg").string(), "--out", dir.string(), "--stride", "4"});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(dir / "snapshots.csv");
    CHECK(csv.rfind("t,r,u\n", 0) == 0);
    CHECK(csv.find("\n2,") != std::string::npos);
}
