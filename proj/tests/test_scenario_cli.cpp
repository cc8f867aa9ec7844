/*
 Copyright 2026 The ofmbrl Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "ofmbrl/cli.hpp"
#include "ofmbrl/scenario.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ofmbrl;
namespace fs = std::filesystem;

namespace {

const fs::path kSourceScenario = fs::path(OFMBRL_SOURCE_DIR) / "scenarios" / "vamvoudakis2d.json";

nlohmann::json benchmark_doc() {
    std::ifstream in(kSourceScenario);
    return nlohmann::json::parse(in);
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ofmbrl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Writes `doc` into a fresh directory and returns the scenario path.
fs::path write_scenario(const std::string& name, nlohmann::json doc) {
    const fs::path dir = fs::temp_directory_path() / ("ofmbrl_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    doc["output"]["dir"] = (dir / "out").string();
    const fs::path path = dir / "scenario.json";
    std::ofstream(path) << doc.dump(2);
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("empty document resolves to the benchmark defaults") {
    const ScenarioConfig cfg = parse_scenario(nlohmann::json::object());
    CHECK(cfg.model == kBenchmarkModelId);
    CHECK(cfg.t_final == 100.0);
    CHECK(cfg.dt == 1e-3);
    CHECK(cfg.estimator.k == 5.0);
    CHECK(cfg.learner.ka1 == 100.0);
    CHECK(cfg.grid_count == 5);
    CHECK(cfg.warnings.empty());

    const SimConfig sim = build_sim_config(cfg);
    const SimConfig ref = benchmark_sim_config();
    CHECK(sim.Gamma0 == ref.Gamma0);
    CHECK(sim.extrapolation.size() == ref.extrapolation.size());
    const ControlProblem problem = build_problem(cfg);
    CHECK(ideal_weights(cfg, problem) == (Vector(3) << 1, 0, 1).finished());
}

TEST_CASE("shipped scenario matches the benchmark") {
    const ScenarioConfig cfg = parse_scenario(benchmark_doc());
    CHECK_NOTHROW(validate_scenario(cfg));
    CHECK(cfg.Gamma0 == 50.0 * Matrix::Identity(3, 3));
    CHECK(cfg.x_hat0 == Vector::Constant(2, -1.0));
}

TEST_CASE("config errors name the offending key") {
    SUBCASE("unknown key") {
        nlohmann::json doc = benchmark_doc();
        doc["learner"]["kappa"] = 1.0;
        try {
            parse_scenario(doc);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key() == "learner.kappa");
        }
    }
    SUBCASE("wrong type") {
        nlohmann::json doc = benchmark_doc();
        doc["simulation"]["dt"] = "fast";
        CHECK_THROWS_AS(parse_scenario(doc), ConfigError);
    }
    SUBCASE("beta must exceed alpha") {
        nlohmann::json doc = benchmark_doc();
        doc["estimator"]["beta"] = 0.1;
        CHECK_THROWS_AS(validate_scenario(parse_scenario(doc)), ConfigError);
    }
    SUBCASE("wrong initial weight length") {
        nlohmann::json doc = benchmark_doc();
        doc["simulation"]["Wc0"] = {1.0, 2.0};
        CHECK_THROWS_AS(validate_scenario(parse_scenario(doc)), ConfigError);
    }
}

TEST_CASE("ideal weights need an analytic value for custom models") {
    nlohmann::json doc = benchmark_doc();
    doc["analytic_weights"] = {2.0, 0.0, 2.0};
    const ScenarioConfig cfg = parse_scenario(doc);
    CHECK(ideal_weights(cfg, build_problem(cfg)) == (Vector(3) << 2, 0, 2).finished());
}

TEST_CASE("nu is accepted with a warning") {
    nlohmann::json doc = benchmark_doc();
    doc["learner"]["nu"] = 0.005;
    const ScenarioConfig cfg = parse_scenario(doc);
    REQUIRE(cfg.warnings.size() == 1);
    CHECK(cfg.warnings[0].find("nu") != std::string::npos);
}

TEST_CASE("dump-config round-trips") {
    nlohmann::json doc = benchmark_doc();
    doc["learner"]["nu"] = 0.005;
    doc["simulation"]["Gamma0"] = {{50.0, 1.0, 0.0}, {1.0, 40.0, 0.0}, {0.0, 0.0, 30.0}};
    const fs::path path = write_scenario("dump", doc);
    const CliResult r = cli({"run", path.string(), "--dump-config", "--dt", "0.002"});
    REQUIRE(r.code == kExitSuccess);
    const nlohmann::json dumped = nlohmann::json::parse(r.out);
    const ScenarioConfig a = parse_scenario(dumped);
    CHECK(a.dt == 0.002);
    CHECK(a.Gamma0(0, 1) == 1.0);
    CHECK(scenario_to_json(a) == dumped);
    CHECK_FALSE(fs::exists(path.parent_path() / "out"));
}

TEST_CASE("cli exit codes") {
    SUBCASE("dt = 0 is a configuration error") {
        const fs::path path = write_scenario("dt0", benchmark_doc());
        const CliResult r = cli({"run", path.string(), "--dt", "0"});
        CHECK(r.code == kExitConfigError);
        CHECK(r.err.find("simulation.dt") != std::string::npos);
    }
    SUBCASE("missing scenario file") {
        CHECK(cli({"run", "/nonexistent/scenario.json"}).code == kExitConfigError);
    }
    SUBCASE("unknown key") {
        nlohmann::json doc = benchmark_doc();
        doc["bogus"] = 1;
        const CliResult r = cli({"verify", write_scenario("bogus", doc).string()});
        CHECK(r.code == kExitConfigError);
        CHECK(r.err.find("bogus") != std::string::npos);
    }
    SUBCASE("missing subcommand") {
        CHECK(cli({}).code == kExitFailure);
    }
    SUBCASE("t_final = 0 writes a single sample") {
        const fs::path path = write_scenario("tf0", benchmark_doc());
        const CliResult r = cli({"run", path.string(), "--t-final", "0"});
        REQUIRE(r.code == kExitSuccess);
        const std::string csv = read_file(path.parent_path() / "out" / "trace.csv");
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
        const nlohmann::json metrics = nlohmann::json::parse(read_file(path.parent_path() / "out" / "metrics.json"));
        CHECK(metrics["samples"] == 1);
        CHECK(metrics["accumulated_cost"] == 0.0);
    }
    SUBCASE("verification failure") {
        nlohmann::json doc = benchmark_doc();
        doc["analytic_weights"] = {2.0, 0.0, 2.0};
        const fs::path path = write_scenario("badweights", doc);
        const fs::path json = path.parent_path() / "report.json";
        const CliResult r = cli({"verify", path.string(), "--json", json.string()});
        CHECK(r.code == kExitVerificationFailed);
        CHECK(r.out.find("FAIL  hjb_ideal_weights") != std::string::npos);
        const nlohmann::json report = nlohmann::json::parse(read_file(json));
        CHECK(report["passed"] == false);
    }
    SUBCASE("divergence") {
        nlohmann::json doc = benchmark_doc();
        doc["simulation"]["learning"] = false;
        doc["simulation"]["Wa0"] = {0.0, 0.0, -100.0};
        doc["simulation"]["t_final"] = 20.0;
        const CliResult r = cli({"run", write_scenario("diverge", doc).string()});
        CHECK(r.code == kExitDivergence);
        CHECK(r.err.find("numerical divergence") != std::string::npos);
    }
}

TEST_CASE("single-point extrapolation grid loses excitation") {
    nlohmann::json doc = benchmark_doc();
    doc["learner"]["grid"]["count"] = 1;
    doc["simulation"]["t_final"] = 0.5;
    const fs::path path = write_scenario("single", doc);
    const CliResult r = cli({"run", path.string()});
    REQUIRE(r.code == kExitSuccess);
    CHECK(r.err.find("warning") != std::string::npos);
    const nlohmann::json metrics = nlohmann::json::parse(read_file(path.parent_path() / "out" / "metrics.json"));
    CHECK(metrics["excitation_lambda_min"].get<double>() <= 1e-12);
}

TEST_CASE("run writes trace and metrics") {
    nlohmann::json doc = benchmark_doc();
    doc["simulation"]["t_final"] = 1.0;
    doc["simulation"]["log_stride"] = 100;
    const fs::path path = write_scenario("short", doc);
    const CliResult r = cli({"run", path.string()});
    REQUIRE(r.code == kExitSuccess);
    const std::string csv = read_file(path.parent_path() / "out" / "trace.csv");
    CHECK(csv.rfind("t,x1,x2,xhat1,xhat2,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
    const nlohmann::json metrics = nlohmann::json::parse(read_file(path.parent_path() / "out" / "metrics.json"));
    CHECK(metrics["final_time"] == 1.0);
    CHECK(metrics.contains("critic_weight_error"));
    CHECK(metrics["gamma_eig_min"].get<double>() > 0.0);

    const fs::path alt = path.parent_path() / "alt";
    CHECK(cli({"run", path.string(), "--out", alt.string()}).code == kExitSuccess);
    CHECK(read_file(alt / "trace.csv") == csv);
}
