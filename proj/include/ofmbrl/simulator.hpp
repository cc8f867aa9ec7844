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

#ifndef OFMBRL_SIMULATOR_HPP
#define OFMBRL_SIMULATOR_HPP

#include "ofmbrl/estimator.hpp"
#include "ofmbrl/learner.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ofmbrl {

struct SimConfig {
    double t_final = 100.0;
    double dt = 1e-3;
    int log_stride = 1;

    Vector x0;
    Vector x_hat0;
    Vector Wc0;
    Vector Wa0;
    Matrix Gamma0;

    EstimatorGains estimator;
    LearnerGains learner;
    ExtrapolationSet extrapolation;

    /// When false the critic, gain matrix and actor are frozen at their initial values.
    bool learning = true;
    /// Optional additive input on top of the learned policy; empty means none.
    std::function<Vector(double)> probe;

    /// A run whose excitation lambda_min stays below this at every sample emits a warning.
    double excitation_floor = 1e-10;
    /// Window length for the integrated excitation condition.
    double excitation_window = 1.0;

    /// Dimension checks, dt > 0, t_final >= 0, Gamma0 symmetric positive definite.
    void validate(const ControlProblem& problem) const;
};

/// Paper benchmark initial conditions and gains on the 5x5 grid over [-1, 1]^2.
SimConfig benchmark_sim_config();

struct SimState {
    double t = 0.0;
    Vector x;
    EstimatorState estimator;
    CriticState critic;
    ActorState actor;
    double cost = 0.0;  ///< integral of r(x, u) from 0 to t
};

/**
 * The coupled plant/estimator/learner vector field on a flat state
 *
 *   [ x | p_hat | q_hat | z | Wc | vec(Gamma) | Wa | J ].
 *
 * The applied control is u_hat(x_hat, Wa) plus the optional probe; the
 * estimator reads only the position block of x. Holds references to the
 * problem and config, which must outlive it.
 */
class ClosedLoop {
public:
    ClosedLoop(const ControlProblem& problem, const SimConfig& config);

    SimState initial_state() const;

    Vector pack(const SimState& state) const;
    SimState unpack(double t, const Vector& y) const;

    Vector control(double t, const EstimatorState& estimator, const ActorState& actor) const;

    /// Throws DivergenceError naming the subsystem whose rate is non-finite.
    Vector derivative(double t, const Vector& y) const;

    Eigen::Index dimension() const noexcept { return dim_; }

private:
    const ControlProblem& problem_;
    const SimConfig& config_;
    int n_;
    int L_;
    Eigen::Index dim_;
};

SimState step(const SimState& state, const SimConfig& config, const ControlProblem& problem);

struct TraceSample {
    double t = 0.0;
    Vector x;
    Vector x_hat;
    Vector eta;
    Vector Wc;
    Vector Wa;
    Vector u;
    double delta_t = 0.0;
    double lambda_min = 0.0;
    double gamma_min = 0.0;
    double gamma_max = 0.0;
    double cost = 0.0;
};

struct SimulationTrace {
    int n = 0;
    int m = 0;
    int L = 0;
    std::vector<TraceSample> samples;
    std::vector<std::string> warnings;
    /// Smallest lambda_min of the windowed excitation integral once the window filled; negative if it never did.
    double windowed_lambda_min = -1.0;

    const TraceSample& final() const { return samples.back(); }
};

SimulationTrace run(const SimConfig& config, const ControlProblem& problem);

/// Trapezoidal quadrature of r(x(t), u(t)) over the logged samples.
double accumulate_cost(const SimulationTrace& trace, const CostSpec& cost);

/// Column names in CSV order.
std::vector<std::string> trace_columns(const SimulationTrace& trace);
void write_trace_csv(const SimulationTrace& trace, std::ostream& out);
std::string trace_csv(const SimulationTrace& trace);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

}  // namespace ofmbrl

#endif  // OFMBRL_SIMULATOR_HPP
