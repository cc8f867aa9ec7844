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

#ifndef OFMBRL_ESTIMATOR_HPP
#define OFMBRL_ESTIMATOR_HPP

#include "ofmbrl/plant.hpp"

namespace ofmbrl {

// Velocity estimator driven by position measurements only:
//
//   p_hat' = q_hat
//   q_hat' = f(x_hat) + g(x_hat) u + nu,      nu  = alpha^2 p~ - (k + alpha + beta) eta
//   z'     = -(beta + k) eta - k alpha p~,     eta = z - (k + alpha) p~
//
// with p~ = y - p_hat. The auxiliary integrator z realizes the filter signal eta
// without differentiating p~. Nothing here ever receives the true velocity.

struct EstimatorGains {
    double alpha = 0.2;
    double k = 5.0;
    double beta = 5.0;

    /// Throws std::invalid_argument unless all gains are positive and beta > alpha.
    void validate() const;
};

struct EstimatorState {
    Vector p_hat;
    Vector q_hat;
    Vector z_aux;

    Vector x_hat() const;
};

/// Start the filter with eta = 0 for an arbitrary initial estimate: z = (k + alpha) p~(0).
EstimatorState init_estimator(const Vector& x_hat0, const Vector& p_measured, const EstimatorGains& gains);

Vector eta_of(const EstimatorState& state, const EstimatorGains& gains, const Vector& p_tilde);

Vector feedback_term(const EstimatorGains& gains, const Vector& p_tilde, const Vector& eta);

struct EstimatorRates {
    Vector p_hat;
    Vector q_hat;
    Vector z_aux;
};

EstimatorRates estimator_derivatives(const EstimatorState& state, const EstimatorGains& gains,
                                     const SystemModel& model, const Vector& p_measured, const Vector& u);

}  // namespace ofmbrl

#endif  // OFMBRL_ESTIMATOR_HPP
