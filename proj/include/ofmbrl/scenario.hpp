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

#ifndef OFMBRL_SCENARIO_HPP
#define OFMBRL_SCENARIO_HPP

#include "ofmbrl/simulator.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ofmbrl {

/**
 * Resolved scenario file contents. Parsing rejects unknown keys and fills
 * missing ones with the benchmark defaults, so a parsed scenario is always
 * complete and dumping it yields a file that reparses to the same values.
 */
struct ScenarioConfig {
    std::string model = kBenchmarkModelId;
    std::string basis = kQuadratic2dBasisId;
    std::vector<std::vector<int>> basis_exponents;  ///< nonempty means a custom monomial basis

    std::string state_cost = "velocity_squared";
    Matrix R = Matrix::Identity(1, 1);

    double t_final = 100.0;
    double dt = 1e-3;
    int log_stride = 1;
    Vector x0 = Vector::Constant(2, 1.0);
    Vector x_hat0 = Vector::Constant(2, -1.0);
    Vector Wc0 = Vector::Constant(3, 0.5);
    Vector Wa0 = Vector::Constant(3, 0.5);
    Matrix Gamma0 = 50.0 * Matrix::Identity(3, 3);
    bool learning = true;
    double excitation_floor = 1e-10;
    double excitation_window = 1.0;

    EstimatorGains estimator;
    LearnerGains learner;
    double grid_extent = 1.0;
    int grid_count = 5;
    std::optional<double> nu;  ///< accepted for compatibility; has no effect

    std::optional<Vector> analytic_weights;

    std::string output_dir = "out";
    std::string trace_file = "trace.csv";
    std::string metrics_file = "metrics.json";

    std::vector<std::string> warnings;
};

/// Throws ConfigError naming the offending key.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::string& path);

nlohmann::json scenario_to_json(const ScenarioConfig& config);

/// Cross-field checks (dimensions, dt > 0, gain positivity); throws ConfigError.
void validate_scenario(const ScenarioConfig& config);

ControlProblem build_problem(const ScenarioConfig& config);
SimConfig build_sim_config(const ScenarioConfig& config);

/// Scenario override if present, else the model's attached weights; throws ConfigError if neither.
Vector ideal_weights(const ScenarioConfig& config, const ControlProblem& problem);

}  // namespace ofmbrl

#endif  // OFMBRL_SCENARIO_HPP
