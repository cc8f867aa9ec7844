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

#ifndef OFMBRL_APPROXIMATOR_HPP
#define OFMBRL_APPROXIMATOR_HPP

#include "ofmbrl/plant.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ofmbrl {

/**
 * A vector of L scalar basis functions over the full state together with its
 * Jacobian. Row i of jacobian(x) is the gradient of the i-th basis function, so
 * the first n columns are the position block and the last n the velocity block.
 *
 * Polynomial bases ship with the library; any other smooth family can be
 * plugged in through the callable constructor.
 */
class Basis {
public:
    using EvalFn = std::function<Vector(const Vector&)>;
    using JacobianFn = std::function<Matrix(const Vector&)>;

    Basis(std::string name, int state_dim, int size, EvalFn eval, JacobianFn jacobian);

    const std::string& name() const noexcept { return name_; }
    int state_dim() const noexcept { return state_dim_; }
    int size() const noexcept { return size_; }

    Vector eval(const Vector& x) const;
    Matrix jacobian(const Vector& x) const;

private:
    std::string name_;
    int state_dim_;
    int size_;
    EvalFn eval_;
    JacobianFn jacobian_;
};

/// Monomial basis; exponents[i][j] is the power of x_j in the i-th function.
Basis monomial_basis(std::vector<std::vector<int>> exponents, std::string name = "monomial");

inline constexpr const char* kQuadratic2dBasisId = "quadratic2d";

/// [x1^2, x1 x2, x2^2].
Basis quadratic2d_basis();

Basis basis_by_id(const std::string& id);

/// Exponent table behind a registered basis identifier.
std::vector<std::vector<int>> basis_exponents(const std::string& id);

/// A scalar function with its gradient, usable as a value-function candidate.
struct ScalarField {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
};

/// x -> W' sigma(x) with gradient sigma_x(x)' W.
ScalarField approximated_value(const Basis& basis, Vector weights);

/// The model's attached V*; throws std::logic_error if absent.
ScalarField analytic_value_field(const SystemModel& model);

double value_hat(const Basis& basis, const Vector& Wc, const Vector& x);

/// -1/2 R^{-1} g(x)' dV/dq for a given full-state gradient dV/dx.
Vector policy_from_gradient(const SystemModel& model, const CostSpec& cost, const Vector& x,
                            const Vector& value_gradient);

/// -1/2 R^{-1} g(x)' sigma_q(x)' Wa.
Vector policy_hat(const SystemModel& model, const CostSpec& cost, const Basis& basis, const Vector& Wa,
                  const Vector& x);

/// HJB residual V_p q + V_q (f + g u*) + Q + u*' R u* with u* the greedy policy of V.
double hjb_residual(const SystemModel& model, const CostSpec& cost, const ScalarField& V, const Vector& x);

}  // namespace ofmbrl

#endif  // OFMBRL_APPROXIMATOR_HPP
