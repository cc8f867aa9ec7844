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

#include "ofmbrl/estimator.hpp"

namespace ofmbrl {

void EstimatorGains::validate() const {
    if (!(alpha > 0.0) || !(k > 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("estimator gains must be strictly positive");
    }
    if (!(beta > alpha)) throw std::invalid_argument("estimator gain beta must exceed alpha");
}

Vector EstimatorState::x_hat() const {
    Vector x(p_hat.size() + q_hat.size());
    x << p_hat, q_hat;
    return x;
}

EstimatorState init_estimator(const Vector& x_hat0, const Vector& p_measured, const EstimatorGains& gains) {
    const Eigen::Index n = p_measured.size();
    require_size(x_hat0, 2 * n, "init_estimator initial estimate");
    EstimatorState state;
    state.p_hat = x_hat0.head(n);
    state.q_hat = x_hat0.tail(n);
    state.z_aux = (gains.k + gains.alpha) * (p_measured - state.p_hat);
    return state;
}

Vector eta_of(const EstimatorState& state, const EstimatorGains& gains, const Vector& p_tilde) {
    require_size(p_tilde, state.z_aux.size(), "eta_of");
    return state.z_aux - (gains.k + gains.alpha) * p_tilde;
}

Vector feedback_term(const EstimatorGains& gains, const Vector& p_tilde, const Vector& eta) {
    return gains.alpha * gains.alpha * p_tilde - (gains.k + gains.alpha + gains.beta) * eta;
}

EstimatorRates estimator_derivatives(const EstimatorState& state, const EstimatorGains& gains,
                                     const SystemModel& model, const Vector& p_measured, const Vector& u) {
    require_size(p_measured, model.n(), "estimator measurement");
    require_size(state.p_hat, model.n(), "estimator p_hat");
    require_size(state.q_hat, model.n(), "estimator q_hat");
    require_size(u, model.m(), "estimator control");

    const Vector p_tilde = p_measured - state.p_hat;
    const Vector eta = eta_of(state, gains, p_tilde);
    const Vector x_hat = state.x_hat();

    EstimatorRates rates;
    rates.p_hat = state.q_hat;
    rates.q_hat = model.drift(x_hat) + model.effectiveness(x_hat) * u + feedback_term(gains, p_tilde, eta);
    rates.z_aux = -(gains.beta + gains.k) * eta - gains.k * gains.alpha * p_tilde;
    return rates;
}

}  // namespace ofmbrl
