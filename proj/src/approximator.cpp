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

#include "ofmbrl/approximator.hpp"

#include <cmath>

namespace ofmbrl {

Basis::Basis(std::string name, int state_dim, int size, EvalFn eval, JacobianFn jacobian)
    : name_(std::move(name)), state_dim_(state_dim), size_(size), eval_(std::move(eval)), jacobian_(std::move(jacobian)) {
    if (state_dim_ <= 0 || size_ <= 0) throw std::invalid_argument("Basis: dimensions must be positive");
    if (!eval_ || !jacobian_) throw std::invalid_argument("Basis: eval and jacobian are required");
}

Vector Basis::eval(const Vector& x) const {
    require_size(x, state_dim_, "basis eval");
    Vector s = eval_(x);
    require_size(s, size_, "basis eval result");
    return s;
}

Matrix Basis::jacobian(const Vector& x) const {
    require_size(x, state_dim_, "basis jacobian");
    Matrix j = jacobian_(x);
    require_shape(j, size_, state_dim_, "basis jacobian result");
    return j;
}

namespace {

double int_power(double base, int exponent) {
    double result = 1.0;
    for (int k = 0; k < exponent; ++k) result *= base;
    return result;
}

}  // namespace

Basis monomial_basis(std::vector<std::vector<int>> exponents, std::string name) {
    if (exponents.empty()) throw std::invalid_argument("monomial_basis: no terms");
    const std::size_t dim = exponents.front().size();
    if (dim == 0 || dim % 2 != 0) throw std::invalid_argument("monomial_basis: state dimension must be even and positive");
    for (const auto& row : exponents) {
        if (row.size() != dim) throw std::invalid_argument("monomial_basis: ragged exponent table");
        for (int e : row) {
            if (e < 0) throw std::invalid_argument("monomial_basis: negative exponent");
        }
    }

    auto eval = [exponents](const Vector& x) {
        Vector s(static_cast<Eigen::Index>(exponents.size()));
        for (std::size_t i = 0; i < exponents.size(); ++i) {
            double term = 1.0;
            for (std::size_t j = 0; j < exponents[i].size(); ++j) term *= int_power(x(j), exponents[i][j]);
            s(i) = term;
        }
        return s;
    };
    auto jacobian = [exponents](const Vector& x) {
        const auto rows = static_cast<Eigen::Index>(exponents.size());
        const auto cols = static_cast<Eigen::Index>(exponents.front().size());
        Matrix jac = Matrix::Zero(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const auto& e = exponents[i];
            for (Eigen::Index k = 0; k < cols; ++k) {
                if (e[k] == 0) continue;
                double term = e[k] * int_power(x(k), e[k] - 1);
                for (Eigen::Index j = 0; j < cols; ++j) {
                    if (j != k) term *= int_power(x(j), e[j]);
                }
                jac(i, k) = term;
            }
        }
        return jac;
    };
    const int size = static_cast<int>(exponents.size());
    return Basis(std::move(name), static_cast<int>(dim), size, std::move(eval), std::move(jacobian));
}

std::vector<std::vector<int>> basis_exponents(const std::string& id) {
    if (id == kQuadratic2dBasisId) return {{2, 0}, {1, 1}, {0, 2}};
    throw std::invalid_argument("unknown basis identifier '" + id + "'");
}

Basis quadratic2d_basis() { return monomial_basis(basis_exponents(kQuadratic2dBasisId), kQuadratic2dBasisId); }

Basis basis_by_id(const std::string& id) { return monomial_basis(basis_exponents(id), id); }

ScalarField approximated_value(const Basis& basis, Vector weights) {
    require_size(weights, basis.size(), "approximated_value weights");
    return ScalarField{
        [basis, weights](const Vector& x) { return weights.dot(basis.eval(x)); },
        [basis, weights](const Vector& x) -> Vector { return basis.jacobian(x).transpose() * weights; },
    };
}

ScalarField analytic_value_field(const SystemModel& model) {
    if (!model.has_analytic_value()) {
        throw std::logic_error("model '" + model.name() + "' has no analytic value function");
    }
    return ScalarField{
        [model](const Vector& x) { return model.analytic_value(x); },
        [model](const Vector& x) { return model.analytic_gradient(x); },
    };
}

double value_hat(const Basis& basis, const Vector& Wc, const Vector& x) {
    require_size(Wc, basis.size(), "value_hat weights");
    return Wc.dot(basis.eval(x));
}

Vector policy_from_gradient(const SystemModel& model, const CostSpec& cost, const Vector& x,
                            const Vector& value_gradient) {
    require_size(value_gradient, model.state_dim(), "policy gradient");
    if (cost.m() != model.m()) throw ShapeError("policy: cost and model control dimensions differ");
    const Matrix g = model.effectiveness(x);
    return -0.5 * cost.control_penalty_inverse() * (g.transpose() * value_gradient.tail(model.n()));
}

Vector policy_hat(const SystemModel& model, const CostSpec& cost, const Basis& basis, const Vector& Wa,
                  const Vector& x) {
    require_size(Wa, basis.size(), "policy_hat weights");
    if (basis.state_dim() != model.state_dim()) throw ShapeError("policy_hat: basis and model state dimensions differ");
    return policy_from_gradient(model, cost, x, basis.jacobian(x).transpose() * Wa);
}

double hjb_residual(const SystemModel& model, const CostSpec& cost, const ScalarField& V, const Vector& x) {
    const int n = model.n();
    const Vector grad = V.gradient(x);
    require_size(grad, model.state_dim(), "hjb_residual gradient");
    const Vector u = policy_from_gradient(model, cost, x, grad);
    const Vector accel = model.drift(x) + model.effectiveness(x) * u;
    return grad.head(n).dot(x.tail(n)) + grad.tail(n).dot(accel) + running_cost(cost, x, u);
}

}  // namespace ofmbrl
