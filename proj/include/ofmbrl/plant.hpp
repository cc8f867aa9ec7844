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

#ifndef OFMBRL_PLANT_HPP
#define OFMBRL_PLANT_HPP

#include "ofmbrl/common.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ofmbrl {

/**
 * Second-order control-affine plant
 *
 *   p' = q,  q' = f(x) + g(x) u,  y = p,   x = [p; q] in R^{2n}, u in R^m.
 *
 * The drift f and effectiveness g are supplied as pure callables. Construction
 * checks f(0) = 0 and the shape of g(0); every later evaluation checks shapes.
 * An analytic optimal value function and ideal basis weights may be attached
 * for oracle checks.
 */
class SystemModel {
public:
    using DriftFn = std::function<Vector(const Vector&)>;
    using EffectivenessFn = std::function<Matrix(const Vector&)>;
    using ValueFn = std::function<double(const Vector&)>;
    using GradientFn = std::function<Vector(const Vector&)>;

    SystemModel(std::string name, int n, int m, DriftFn drift, EffectivenessFn effectiveness);

    /// Attach a known optimal value function V* and its gradient.
    SystemModel& with_analytic_value(ValueFn value, GradientFn gradient);
    SystemModel& with_analytic_weights(Vector weights);

    const std::string& name() const noexcept { return name_; }
    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    int state_dim() const noexcept { return 2 * n_; }

    bool has_analytic_value() const noexcept { return static_cast<bool>(value_); }
    double analytic_value(const Vector& x) const;
    Vector analytic_gradient(const Vector& x) const;
    const std::optional<Vector>& analytic_weights() const noexcept { return weights_; }

    Vector drift(const Vector& x) const;
    Matrix effectiveness(const Vector& x) const;

private:
    std::string name_;
    int n_;
    int m_;
    DriftFn drift_;
    EffectivenessFn effectiveness_;
    ValueFn value_;
    GradientFn gradient_;
    std::optional<Vector> weights_;
};

Vector eval_drift(const SystemModel& model, const Vector& x);
Matrix eval_effectiveness(const SystemModel& model, const Vector& x);

/// Full-state input map [0_{n x m}; g(x)].
Matrix lifted_effectiveness(const SystemModel& model, const Vector& x);

/// Which clause of the cost-restriction assumption the state cost satisfies.
enum class AssumptionCase { PositiveDefinite, PositionDefinite, VelocityDefinite };

/// Running cost r(x, u) = Q(x) + u' R u with Q over the full state.
class CostSpec {
public:
    using StateCostFn = std::function<double(const Vector&)>;

    CostSpec(StateCostFn state_cost, Matrix control_penalty, AssumptionCase assumption_case);

    double state_cost(const Vector& x) const { return state_cost_(x); }
    const Matrix& control_penalty() const noexcept { return penalty_; }
    const Matrix& control_penalty_inverse() const noexcept { return penalty_inverse_; }
    AssumptionCase assumption_case() const noexcept { return case_; }
    int m() const noexcept { return static_cast<int>(penalty_.rows()); }

private:
    StateCostFn state_cost_;
    Matrix penalty_;
    Matrix penalty_inverse_;
    AssumptionCase case_;
};

double running_cost(const CostSpec& cost, const Vector& x, const Vector& u);

struct AssumptionReport {
    bool passed = true;
    AssumptionCase assumption_case = AssumptionCase::PositiveDefinite;
    std::vector<Vector> counterexamples;
    std::vector<std::string> reasons;
};

/// Sampled check of the declared cost-restriction clause. Violations are reported, not thrown.
AssumptionReport check_assumption1(const CostSpec& cost, const SystemModel& model,
                                   std::span<const Vector> samples);

// Benchmark: f(x) = -x1 - x2 (1 - (cos 2x1 + 2)^2) / 2, g(x) = cos 2x1 + 2,
// Q(x) = x2^2, R = 1, V*(x) = x1^2 + x2^2.
inline constexpr const char* kBenchmarkModelId = "vamvoudakis2d";

SystemModel benchmark_model();
CostSpec benchmark_cost();

/// Registered model identifiers for configuration files.
SystemModel model_by_id(const std::string& id);

}  // namespace ofmbrl

#endif  // OFMBRL_PLANT_HPP
