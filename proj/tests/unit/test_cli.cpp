#include "sabinelab/errors.hpp"
#include "sabinelab_cli/config.hpp"
#include "sabinelab_cli/figure.hpp"
#include "sabinelab_cli/run.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace sabinelab;
using namespace sabinelab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("sabinelab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_exe(const std::string& args) {
    const std::string cmd = std::string(SABINELAB_CLI_EXE) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config file parsing") {
    const fs::path dir = scratch("cfg");
    std::ofstream(dir / "run.cfg") << "# comment\nproblem = damping\n  a = 3.5  # trailing\nre = 100:300\n"
                                      "out = \"some dir\"\n\nim_floor=-2\n";
    const auto kv = read_config_file((dir / "run.cfg").string());
    CHECK(kv.at("problem") == "damping");
    CHECK(kv.at("a") == "3.5");
    CHECK(kv.at("re") == "100:300");
    CHECK(kv.at("out") == "some dir");
    CHECK(kv.at("im_floor") == "-2");

    RunConfig cfg;
    for (const auto& [k, v] : kv) apply_setting(cfg, k, v);
    CHECK(cfg.problem == "damping");
    CHECK(cfg.a == 3.5);
    CHECK(cfg.re_min == 100.0);
    CHECK(cfg.out == "some dir");

    CHECK_THROWS_AS(read_config_file((dir / "missing.cfg").string()), IoError);
    std::ofstream(dir / "bad.cfg") << "just words\n";
    CHECK_THROWS_AS(read_config_file((dir / "bad.cfg").string()), ConfigError);
}

TEST_CASE("settings and ranges") {
    RunConfig cfg;
    apply_setting(cfg, "re", "500:800");
    apply_setting(cfg, "n", "3:90");
    apply_setting(cfg, "criteria", "1,4,9x");
    CHECK(cfg.re_min == 500.0);
    CHECK(cfg.re_max == 800.0);
    CHECK(cfg.n_min == 3);
    CHECK(cfg.n_max == 90);
    CHECK(cfg.criteria == std::vector<std::string>{"1", "4", "9x"});
    CHECK_THROWS_AS(apply_setting(cfg, "re", "500"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "c", "two"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "grid", "2.5"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "colour", "red"), ConfigError);
}

TEST_CASE("validation") {
    RunConfig cfg;
    cfg.command = "bounds";
    CHECK_NOTHROW(validate(cfg));
    auto bad = [&](auto mutate) {
        RunConfig c = cfg;
        mutate(c);
        CHECK_THROWS_AS(validate(c), ConfigError);
    };
    bad([](RunConfig& c) { c.command = "draw"; });
    bad([](RunConfig& c) { c.problem = "wedge"; });
    bad([](RunConfig& c) { c.c = 1.0; });
    bad([](RunConfig& c) { c.re_min = 400.0; });
    bad([](RunConfig& c) { c.re_max = 30000.0; });
    bad([](RunConfig& c) { c.im_floor = 0.5; });
    bad([](RunConfig& c) { c.im_floor = -80.0; });
    bad([](RunConfig& c) { c.grid = 1; });
    bad([](RunConfig& c) { c.family = "glancing"; });
    bad([](RunConfig& c) { c.command = "bands"; });
    bad([](RunConfig& c) { c.workers = -1; });
}

TEST_CASE("config hash ignores out and workers") {
    RunConfig a;
    a.command = "bounds";
    RunConfig b = a;
    b.out = "elsewhere";
    b.workers = 7;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.c = 2.5;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(canonical(a).find("out=") == std::string::npos);
}

TEST_CASE("figures") {
    CHECK_THROWS_AS(emit_figure({}, {FigureSpec{}}), ConfigError);
    disk::Resonance r;
    r.lambda = {250.0, -1.1};
    r.n = 10;
    r.tangent_freq = 0.04;
    const std::string svg = emit_figure({r}, {FigureSpec{}, FigureSpec{Axis::tangent_freq, Axis::im_lambda, "t", {}}});
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
    CHECK(std::isnan(axis_value(Axis::log_neg_im_lambda, disk::Resonance{})));
}

TEST_CASE("resonance csv round trip") {
    const fs::path dir = scratch("csv");
    disk::Resonance a;
    a.lambda = {203.123456789012, -1.10012345678};
    a.n = 17;
    a.residual = 3.2e-11;
    a.seed = disk::SeedKind::continuation;
    a.problem = "transparent";
    a.tangent_freq = 17 / 203.123456789012;
    {
        std::ofstream os(dir / "r.csv");
        disk::write_resonance_csv(os, {a, a});
    }
    const auto rows = read_resonance_csv((dir / "r.csv").string());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].n == 17);
    CHECK(rows[0].lambda.real() == doctest::Approx(a.lambda.real()).epsilon(1e-11));
    CHECK(rows[0].lambda.imag() == doctest::Approx(a.lambda.imag()).epsilon(1e-11));
    CHECK(rows[0].seed == disk::SeedKind::continuation);
    CHECK(rows[0].problem == "transparent");
    CHECK_THROWS_AS(read_resonance_csv((dir / "none.csv").string()), IoError);
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(ConfigError("x")) == 2);
    CHECK(exit_code_for(NumericalError("x")) == 3);
    CHECK(exit_code_for(IoError("x")) == 4);
    CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("command line: flags override the config file") {
    const fs::path dir = scratch("flags");
    std::ofstream(dir / "run.cfg") << "c = 3\nalpha = 1\nnmax = 2\n";
    const std::string out = (dir / "out").string();
    REQUIRE(run_exe("bounds --config " + (dir / "run.cfg").string() + " --c 2.5 --out " + out) == 0);
    const auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest_bounds.json"));
    CHECK(m["problem"]["c"].get<double>() == 2.5);
    CHECK(m["config"].get<std::string>().find("nmax=2\n") != std::string::npos);
    CHECK(m["command"] == "bounds");

    const std::string first = slurp(dir / "out" / "bounds.json");
    REQUIRE(run_exe("bounds --config " + (dir / "run.cfg").string() + " --c 2.5 --workers 1 --out " + out) == 0);
    CHECK(slurp(dir / "out" / "bounds.json") == first);
}

TEST_CASE("command line: exit codes") {
    const fs::path dir = scratch("codes");
    const std::string out = " --out " + (dir / "o").string();
    CHECK(run_exe("bounds --problem wedge" + out) == 2);
    CHECK(run_exe("bounds --c 1" + out) == 2);
    CHECK(run_exe("bounds --re 5" + out) == 2);
    CHECK(run_exe("frobnicate") == 2);
    CHECK(run_exe("bounds --config " + (dir / "nope.cfg").string() + out) == 4);
    CHECK(run_exe("plot" + out) == 4);
    CHECK(run_exe("bands --problem delta --v-exponent 0.8333 --bands 2" + out) == 0);
    CHECK(fs::exists(dir / "o" / "bands.json"));
}

TEST_CASE("command line: resonances then plot") {
    const fs::path dir = scratch("plot");
    const std::string out = " --out " + (dir / "o").string();
    REQUIRE(run_exe("resonances --re 200:215 --n 0:12" + out) == 0);
    const auto rows = read_resonance_csv((dir / "o" / "resonances.csv").string());
    CHECK(!rows.empty());
    for (const auto& r : rows) CHECK(r.residual < 1e-8);
    CHECK(run_exe("plot --fig circle --re 200:215 --n 0:12" + out) == 0);
    CHECK(fs::exists(dir / "o" / "fig_circle.svg"));
    CHECK(run_exe("plot --fig circle --c 3" + out) == 2);
}
