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

#include "ofmbrl/plant.hpp"

#include <cmath>

namespace ofmbrl {

SystemModel::SystemModel(std::string name, int n, int m, DriftFn drift, EffectivenessFn effectiveness)
    : name_(std::move(name)), n_(n), m_(m), drift_(std::move(drift)), effectiveness_(std::move(effectiveness)) {
    if (n_ <= 0 || m_ <= 0) {
        throw std::invalid_argument("SystemModel: n and m must be positive");
    }
    if (!drift_ || !effectiveness_) {
        throw std::invalid_argument("SystemModel: drift and effectiveness are required");
    }
    const Vector origin = Vector::Zero(state_dim());
    const Vector f0 = this->drift(origin);
    if (f0.lpNorm<Eigen::Infinity>() != 0.0) {
        throw std::invalid_argument("SystemModel '" + name_ + "': drift(0) must be 0");
    }
    this->effectiveness(origin);
}

SystemModel& SystemModel::with_analytic_value(ValueFn value, GradientFn gradient) {
    value_ = std::move(value);
    gradient_ = std::move(gradient);
    return *this;
}

SystemModel& SystemModel::with_analytic_weights(Vector weights) {
    weights_ = std::move(weights);
    return *this;
}

double SystemModel::analytic_value(const Vector& x) const {
    if (!value_) throw std::logic_error("model '" + name_ + "' has no analytic value function");
    require_size(x, state_dim(), "analytic_value");
    return value_(x);
}

Vector SystemModel::analytic_gradient(const Vector& x) const {
    if (!gradient_) throw std::logic_error("model '" + name_ + "' has no analytic value gradient");
    require_size(x, state_dim(), "analytic_gradient");
    Vector grad = gradient_(x);
    require_size(grad, state_dim(), "analytic_gradient result");
    return grad;
}

Vector SystemModel::drift(const Vector& x) const {
    require_size(x, state_dim(), "drift");
    Vector f = drift_(x);
    require_size(f, n_, "drift result");
    return f;
}

Matrix SystemModel::effectiveness(const Vector& x) const {
    require_size(x, state_dim(), "effectiveness");
    Matrix g = effectiveness_(x);
    require_shape(g, n_, m_, "effectiveness result");
    return g;
}

Vector eval_drift(const SystemModel& model, const Vector& x) { return model.drift(x); }

Matrix eval_effectiveness(const SystemModel& model, const Vector& x) { return model.effectiveness(x); }

Matrix lifted_effectiveness(const SystemModel& model, const Vector& x) {
    Matrix lifted = Matrix::Zero(model.state_dim(), model.m());
    lifted.bottomRows(model.n()) = model.effectiveness(x);
    return lifted;
}

CostSpec::CostSpec(StateCostFn state_cost, Matrix control_penalty, AssumptionCase assumption_case)
    : state_cost_(std::move(state_cost)), penalty_(std::move(control_penalty)), case_(assumption_case) {
    if (!state_cost_) throw std::invalid_argument("CostSpec: state cost is required");
    if (penalty_.rows() == 0 || penalty_.rows() != penalty_.cols()) {
        throw ShapeError("CostSpec: control penalty must be square and nonempty");
    }
    if (!penalty_.isApprox(penalty_.transpose(), 1e-12)) {
        throw std::invalid_argument("CostSpec: control penalty must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(penalty_);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
        throw std::invalid_argument("CostSpec: control penalty must be positive definite");
    }
    penalty_inverse_ = penalty_.llt().solve(Matrix::Identity(penalty_.rows(), penalty_.cols()));
}

double running_cost(const CostSpec& cost, const Vector& x, const Vector& u) {
    require_size(u, cost.m(), "running_cost control");
    return cost.state_cost(x) + u.dot(cost.control_penalty() * u);
}

AssumptionReport check_assumption1(const CostSpec& cost, const SystemModel& model,
                                   std::span<const Vector> samples) {
    AssumptionReport report;
    report.assumption_case = cost.assumption_case();
    const int n = model.n();

    auto fail = [&](const Vector& x, std::string reason) {
        report.passed = false;
        report.counterexamples.push_back(x);
        report.reasons.push_back(std::move(reason));
    };

    for (const Vector& x : samples) {
        require_size(x, model.state_dim(), "check_assumption1 sample");
        const double q_cost = cost.state_cost(x);
        const bool p_nonzero = x.head(n).lpNorm<Eigen::Infinity>() > 0.0;
        const bool q_nonzero = x.tail(n).lpNorm<Eigen::Infinity>() > 0.0;

        switch (cost.assumption_case()) {
        case AssumptionCase::PositiveDefinite:
            if (!(q_cost > 0.0) && (p_nonzero || q_nonzero)) fail(x, "Q(x) <= 0 at nonzero x");
            break;
        case AssumptionCase::PositionDefinite:
            if (q_cost < 0.0) fail(x, "Q(x) < 0");
            else if (p_nonzero && !(q_cost > 0.0)) fail(x, "Q(x) <= 0 with p != 0");
            break;
        case AssumptionCase::VelocityDefinite:
            if (q_cost < 0.0) fail(x, "Q(x) < 0");
            else if (q_nonzero && !(q_cost > 0.0)) fail(x, "Q(x) <= 0 with q != 0");
            else if (p_nonzero && model.drift(x).lpNorm<Eigen::Infinity>() == 0.0) fail(x, "f(x) = 0 with p != 0");
            break;
        }
    }
    return report;
}

SystemModel benchmark_model() {
    auto drift = [](const Vector& x) {
        const double g = std::cos(2.0 * x(0)) + 2.0;
        Vector f(1);
        f(0) = -x(0) - 0.5 * x(1) * (1.0 - g * g);
        return f;
    };
    auto effectiveness = [](const Vector& x) {
        Matrix g(1, 1);
        g(0, 0) = std::cos(2.0 * x(0)) + 2.0;
        return g;
    };
    SystemModel model(kBenchmarkModelId, 1, 1, drift, effectiveness);
    model.with_analytic_value([](const Vector& x) { return x.squaredNorm(); },
                              [](const Vector& x) -> Vector { return 2.0 * x; });
    model.with_analytic_weights((Vector(3) << 1.0, 0.0, 1.0).finished());
    return model;
}

CostSpec benchmark_cost() {
    return CostSpec([](const Vector& x) { return x(1) * x(1); }, Matrix::Identity(1, 1),
                    AssumptionCase::VelocityDefinite);
}

SystemModel model_by_id(const std::string& id) {
    if (id == kBenchmarkModelId) return benchmark_model();
    throw std::invalid_argument("unknown model identifier '" + id + "'");
}

}  // namespace ofmbrl
