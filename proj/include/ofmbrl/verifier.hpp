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

#ifndef OFMBRL_VERIFIER_HPP
#define OFMBRL_VERIFIER_HPP

#include "ofmbrl/simulator.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ofmbrl {

struct Check {
    std::string id;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string samples;  ///< what the check was evaluated on
    bool hard = true;     ///< advisory checks never fail a report
    std::string detail;
};

struct VerificationReport {
    std::vector<Check> checks;

    void add(Check check) { checks.push_back(std::move(check)); }
    void append(const VerificationReport& other);
    /// True iff every hard check passed.
    bool passed() const;
    const Check* find(const std::string& id) const;

    std::string to_text() const;
    nlohmann::json to_json() const;
};

/// Tensor grid of `count` nodes per axis over [lo, hi]^dim.
struct GridSpec {
    double lo = -2.0;
    double hi = 2.0;
    int count = 21;

    std::vector<Vector> points(int dim) const;
    std::string describe(int dim) const;
};

/// Uniform samples in the closed ball of `radius`, reproducible from `seed`.
std::vector<Vector> random_ball_points(int dim, int count, double radius, std::uint64_t seed);

VerificationReport hjb_sweep(const SystemModel& model, const CostSpec& cost, const ScalarField& V,
                             const GridSpec& grid, double tolerance = 1e-9, const std::string& id = "hjb_sweep");

/**
 * Central finite-difference check of a Jacobian. The error at a point is
 * ||J - J_fd||_F / max(1, ||J||_F); the check reports the worst point.
 */
Check jacobian_check(const std::string& id, const std::function<Vector(const Vector&)>& f,
                     const std::function<Matrix(const Vector&)>& jacobian, const std::vector<Vector>& points,
                     double tolerance = 1e-6, double step = 1e-6);

Check check_basis_gradient(const Basis& basis, const std::vector<Vector>& points, double tolerance = 1e-6);
Check check_value_gradient(const std::string& id, const ScalarField& V, const std::vector<Vector>& points,
                           double tolerance = 1e-6);

/// max |delta(W, W, x)| over the points; zero for an exact basis at the ideal weights.
Check bellman_identity_check(const ControlProblem& problem, const Vector& weights, const std::vector<Vector>& points,
                             double tolerance = 1e-9);

/// Explicit Euler on the closed-loop field at step dt/refinement over [0, t_final].
SimState reference_integrate(const SimConfig& config, const ControlProblem& problem, int refinement);

/// RK4 (via run) final plant state compared against reference_integrate.
Check integrator_oracle_check(const SimConfig& config, const ControlProblem& problem, int refinement,
                              double tolerance = 1e-3);

struct FilterSignal {
    std::vector<double> t;
    std::vector<Vector> r;
    std::vector<Vector> eta;
};

/// Offline r = q~ + alpha p~ + eta from a trace that logs both x and x_hat.
FilterSignal reconstruct_filter_signal(const SimulationTrace& trace, const EstimatorGains& gains);

/**
 * eta(t) = (k + alpha) p~(0) - int_0^t [(beta + k) eta + k alpha p~] - (k + alpha) p~(t),
 * with each logged interval integrated by the quadratic through three neighbouring samples.
 */
std::vector<Vector> eta_quadrature(const SimulationTrace& trace, const EstimatorGains& gains);

/// Final max-norm weight errors and first-passage times below each threshold.
VerificationReport monitor_weight_convergence(const SimulationTrace& trace, const Vector& ideal,
                                              double tolerance = 0.1,
                                              const std::vector<double>& thresholds = {0.1, 0.01});

/// Advisory: V*(x) + |Wc~|^2/2 + |Wa~|^2/2 should not increase by more than `tolerance` per sample after `skip` s.
Check lyapunov_decrease_check(const SimulationTrace& trace, const SystemModel& model, const Vector& ideal,
                              double skip = 5.0, double tolerance = 1e-3);

struct SuiteOptions {
    GridSpec hjb_grid{};
    int random_points = 100;
    double random_radius = 2.0;
    std::uint64_t seed = 20190301;
    double oracle_horizon = 10.0;
    int oracle_refinement = 10;
    double oracle_tolerance = 1e-3;
};

/// HJB sweeps, Bellman identity, gradient checks, integrator oracle and excitation check.
VerificationReport verification_suite(const ControlProblem& problem, const SimConfig& config, const Vector& ideal,
                                      const SuiteOptions& options = {});

}  // namespace ofmbrl

#endif  // OFMBRL_VERIFIER_HPP
