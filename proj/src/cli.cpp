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

#include "ofmbrl/verifier.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

namespace ofmbrl {

namespace fs = std::filesystem;

nlohmann::json run_metrics(const SimulationTrace& trace, const ControlProblem& problem,
                           const std::optional<Vector>& ideal) {
    const TraceSample& last = trace.final();
    const int n2 = 2 * trace.n;

    double gamma_min = std::numeric_limits<double>::infinity();
    double gamma_max = -std::numeric_limits<double>::infinity();
    double lambda_min = std::numeric_limits<double>::infinity();
    for (const TraceSample& s : trace.samples) {
        gamma_min = std::min(gamma_min, s.gamma_min);
        gamma_max = std::max(gamma_max, s.gamma_max);
        lambda_min = std::min(lambda_min, s.lambda_min);
    }

    nlohmann::json m;
    m["final_time"] = last.t;
    m["samples"] = trace.samples.size();
    if (ideal) {
        m["critic_weight_error"] = (last.Wc - *ideal).lpNorm<Eigen::Infinity>();
        m["actor_weight_error"] = (last.Wa - *ideal).lpNorm<Eigen::Infinity>();
    } else {
        m["critic_weight_error"] = nullptr;
        m["actor_weight_error"] = nullptr;
    }
    m["final_state_norm"] = last.x.norm();
    m["final_estimation_error_norm"] = (last.x - last.x_hat.head(n2)).norm();
    m["accumulated_cost"] = last.cost;
    m["accumulated_cost_trapezoid"] = accumulate_cost(trace, problem.cost);
    m["gamma_eig_min"] = gamma_min;
    m["gamma_eig_max"] = gamma_max;
    m["excitation_lambda_min"] = lambda_min;
    m["windowed_excitation_lambda_min"] = trace.windowed_lambda_min < 0.0 ? nlohmann::json(nullptr)
                                                                          : nlohmann::json(trace.windowed_lambda_min);
    m["warnings"] = trace.warnings;
    return m;
}

namespace {

struct Options {
    std::string scenario;
    std::string out_dir;
    std::string json_path;
    std::optional<double> dt;
    std::optional<double> t_final;
    bool dump = false;
};

ScenarioConfig resolve(const Options& opts) {
    ScenarioConfig cfg = load_scenario(opts.scenario);
    if (opts.dt) cfg.dt = *opts.dt;
    if (opts.t_final) cfg.t_final = *opts.t_final;
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    validate_scenario(cfg);
    return cfg;
}

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = resolve(opts);
    if (opts.dump) {
        out << scenario_to_json(cfg).dump(2) << '\n';
        return kExitSuccess;
    }
    for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';

    const ControlProblem problem = build_problem(cfg);
    const SimConfig sim = build_sim_config(cfg);
    std::optional<Vector> ideal;
    try {
        ideal = ideal_weights(cfg, problem);
    } catch (const ConfigError&) {
    }

    const SimulationTrace trace = run(sim, problem);
    for (const auto& w : trace.warnings) err << "warning: " << w << '\n';

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    {
        std::ofstream csv(dir / cfg.trace_file, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write " + (dir / cfg.trace_file).string());
        write_trace_csv(trace, csv);
    }
    const nlohmann::json metrics = run_metrics(trace, problem, ideal);
    {
        std::ofstream js(dir / cfg.metrics_file);
        if (!js) throw std::runtime_error("cannot write " + (dir / cfg.metrics_file).string());
        js << metrics.dump(2) << '\n';
    }
    out << "wrote " << (dir / cfg.trace_file).string() << " and " << (dir / cfg.metrics_file).string() << '\n';
    out << metrics.dump(2) << '\n';
    return kExitSuccess;
}

int cmd_verify(const Options& opts, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = resolve(opts);
    if (opts.dump) {
        out << scenario_to_json(cfg).dump(2) << '\n';
        return kExitSuccess;
    }
    for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';

    const ControlProblem problem = build_problem(cfg);
    const SimConfig sim = build_sim_config(cfg);
    const VerificationReport report = verification_suite(problem, sim, ideal_weights(cfg, problem));

    out << report.to_text();
    for (const Check& c : report.checks) {
        if (!c.passed && !c.hard) err << "warning: " << c.id << ": " << c.detail << '\n';
    }
    if (!opts.json_path.empty()) {
        std::ofstream js(opts.json_path);
        if (!js) throw std::runtime_error("cannot write " + opts.json_path);
        js << report.to_json().dump(2) << '\n';
    }
    return report.passed() ? kExitSuccess : kExitVerificationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Output-feedback model-based reinforcement learning simulator", "ofmbrl"};
    app.require_subcommand(1);

    Options opts;
    double dt = 0.0;
    double t_final = 0.0;

    CLI::App* run_cmd = app.add_subcommand("run", "Simulate a scenario and write trace CSV and metrics JSON");
    run_cmd->add_option("scenario", opts.scenario, "Scenario JSON file")->required();
    run_cmd->add_option("--out", opts.out_dir, "Output directory (overrides output.dir)");
    auto* dt_opt = run_cmd->add_option("--dt", dt, "Integration step in seconds");
    auto* tf_opt = run_cmd->add_option("--t-final", t_final, "Simulation horizon in seconds");
    run_cmd->add_flag("--dump-config", opts.dump, "Print the resolved scenario and exit");

    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the verification suite against a scenario");
    verify_cmd->add_option("scenario", opts.scenario, "Scenario JSON file")->required();
    verify_cmd->add_option("--json", opts.json_path, "Also write the report as JSON");
    verify_cmd->add_flag("--dump-config", opts.dump, "Print the resolved scenario and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitSuccess : kExitFailure;
    }
    if (dt_opt->count() > 0) opts.dt = dt;
    if (tf_opt->count() > 0) opts.t_final = t_final;

    try {
        if (*run_cmd) return cmd_run(opts, out, err);
        return cmd_verify(opts, out, err);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const DivergenceError& e) {
        err << "numerical divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace ofmbrl
