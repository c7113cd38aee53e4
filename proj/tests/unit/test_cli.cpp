#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rigidity/cli.hpp"
#include "rigidity/errors.hpp"

using namespace rigidity;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("rigidity_cli_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("config text round-trips exactly") {
    RunConfig c;
    c.geometry.kind = "torus";
    c.geometry.n = 2;
    c.geometry.N = 512;
    c.params.p = 1.5;
    c.params.q = 0.1 + 0.2 + 1.5;
    c.params.lambda = 1.0 / 3.0;
    c.solver.res_tol = 3e-11;
    c.solver.eps = 1e-9;
    c.solver.frozen_jacobian = true;
    c.flow.t_end = 2.5;
    c.flow.log_space = true;
    c.output.dir = "runs/a";
    c.output.formats = "csv";
    c.seed = 18446744073709551615ull;
    CHECK(parse_config(format_config(c)) == c);
    CHECK(parse_config(format_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("config parsing") {
    const RunConfig c = parse_config("# comment\n\n  params.q = 3.5  \ngeometry.kind=torus\n");
    CHECK(c.params.q == 3.5);
    CHECK(c.geometry.kind == "torus");
    CHECK(c.geometry.N == 400);
    CHECK_THROWS_AS(parse_config("bogus.key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("params.p = two\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("geometry.N = 4.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("solver.frozen_jacobian = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("params.p\n"), ConfigError);
}

TEST_CASE("constants command") {
    const Run r = run({"constants", "--n", "3", "--p", "2", "--q", "4"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "constants");
    CHECK(j["result"]["beta"].get<double>() == 2.5);
    CHECK(j["result"]["theta"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(j["result"]["kappa"].get<double>() == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(j["result"]["s"].get<double>() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(j["result"]["p_star"].get<double>() == 6.0);
}

TEST_CASE("exit codes") {
    const Run boundary = run({"constants", "--n", "3", "--p", "2", "--q", "6.0"});
    CHECK(boundary.code == 2);
    CHECK(boundary.err.find("RangeError") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"constants", "--p"}).code == 2);
    CHECK(run({"constants", "--geometry", "cube"}).code == 2);
    CHECK(run({"constants", "--config", "/nonexistent/config.txt"}).code == 2);
    CHECK(run({"verify", "--field", "no-such-field"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify passes on exp(cos) over the sphere") {
    const Run r = run({"verify", "--geometry", "sphere", "--n", "3", "--p", "2", "--field", "exp-cos"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["result"]["unconditional"].size() == 4);
}

TEST_CASE("every subcommand honors dry-run") {
    for (const char* cmd : {"constants", "certificate", "verify", "solve", "scan", "flow", "lambda1", "lambda-star",
                            "interp-check"}) {
        CAPTURE(cmd);
        const Run r = run({cmd, "--dry-run"});
        CHECK(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["dry_run"] == true);
        CHECK(j["constants"]["beta"].get<double>() == 2.5);
    }
    CHECK(run({"solve", "--dry-run", "--N", "4"}).code == 2);
}

TEST_CASE("flags override the config file") {
    const auto dir = scratch("config");
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "run.cfg");
        os << "params.q = 3\ngeometry.N = 128\n";
    }
    const Run r = run({"constants", "--dry-run", "--config", (dir / "run.cfg").string(), "--q", "5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["config"]["params.q"] == "5");
    CHECK(j["config"]["geometry.N"] == "128");
}

TEST_CASE("identical seeds give byte-identical outputs") {
    const auto dir = scratch("seeded");
    const std::vector<std::string> args{"interp-check", "--N", "64", "--samples", "20", "--lambda-hat", "3",
                                        "--seed", "11", "--out", dir.string()};
    const std::vector<std::string> files{"interp-check.json", "interpolation.csv", "config.txt"};
    REQUIRE(run(args).code == 0);
    std::vector<std::string> first;
    for (const auto& f : files) first.push_back(slurp(dir / f));
    const Run again = run(args);
    REQUIRE(again.code == 0);
    for (size_t i = 0; i < files.size(); ++i) {
        CAPTURE(files[i]);
        CHECK(!first[i].empty());
        CHECK(first[i] == slurp(dir / files[i]));
    }
    const Run other = run({"interp-check", "--N", "64", "--samples", "20", "--lambda-hat", "3", "--seed", "12",
                           "--out", dir.string()});
    CHECK(other.code == 0);
    CHECK(slurp(dir / "interpolation.csv") != first[1]);
}

TEST_CASE("solve writes the solution table") {
    const auto dir = scratch("solve");
    const Run r = run({"solve", "--N", "100", "--lambda", "2", "--out", dir.string(), "--formats", "csv"});
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(dir / "solution.csv"));
    CHECK(!std::filesystem::exists(dir / "solve.json"));
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"]["classification"] == "ConstantOne");
}
