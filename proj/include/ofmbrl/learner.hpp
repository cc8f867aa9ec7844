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

#ifndef OFMBRL_LEARNER_HPP
#define OFMBRL_LEARNER_HPP

#include "ofmbrl/approximator.hpp"

#include <deque>
#include <vector>

namespace ofmbrl {

/// Model, cost and basis that the learner evaluates Bellman errors against.
struct ControlProblem {
    SystemModel model;
    CostSpec cost;
    Basis basis;

    ControlProblem(SystemModel model, CostSpec cost, Basis basis);
};

struct LearnerGains {
    double kc = 0.2;           ///< critic adaptation gain
    double ka1 = 100.0;        ///< actor tracking gain
    double ka2 = 0.1;          ///< actor damping gain
    double gamma1 = 1.0;       ///< regressor normalization gain
    double beta_forget = 3.0;  ///< forgetting factor of the gain matrix
    bool negate_actor_sum = false;

    void validate() const;
};

struct CriticState {
    Vector Wc;
    Matrix Gamma;
};

struct ActorState {
    Vector Wa;
};

/// Off-trajectory states at which the Bellman error is extrapolated.
struct ExtrapolationSet {
    std::vector<Vector> points;

    /// Uniform tensor grid over [-extent, extent]^dim with `count` nodes per axis.
    static ExtrapolationSet grid(int dim, double extent, int count);

    std::size_t size() const noexcept { return points.size(); }
};

struct Regressor {
    Vector omega;
    double rho = 1.0;
};

/// omega = sigma_p(x) q + sigma_q(x) (f(x) + g(x) u_hat(x, Wa)), rho = 1 + gamma1 omega'omega.
Regressor regressor(const ControlProblem& problem, const Vector& Wa, const Vector& x, double gamma1);

/// delta = Wc' omega + Q(x) + u_hat' R u_hat, affine in Wc.
double bellman_error(const ControlProblem& problem, const Vector& Wc, const Vector& Wa, const Vector& x);

/// sigma_q g R^{-1} g' sigma_q' at x, an L x L matrix.
Matrix policy_curvature(const ControlProblem& problem, const Vector& x);

struct CriticRates {
    Vector Wc;
    Matrix Gamma;
};

struct LearnerRates {
    Vector Wc;
    Matrix Gamma;
    Vector Wa;
};

/**
 * Critic, gain-matrix and actor rates in one pass over the extrapolation set:
 *
 *   Wc'    = -(kc/N) Gamma sum_i omega_i delta_i / rho_i
 *   Gamma' = beta Gamma - (kc/N) Gamma (sum_i omega_i omega_i' / rho_i^2) Gamma
 *   Wa'    = -ka1 (Wa - Wc) - ka2 Wa + sum_i kc G_i' Wa omega_i' Wc / (4 N rho_i)
 *
 * Per-point sums are reduced in index order, so results are bit-reproducible.
 * A non-finite omega or delta raises NumericalError carrying the point index.
 */
LearnerRates learner_derivatives(const CriticState& critic, const ActorState& actor, const LearnerGains& gains,
                                 const ExtrapolationSet& set, const ControlProblem& problem);

CriticRates critic_derivatives(const CriticState& critic, const ActorState& actor, const LearnerGains& gains,
                               const ExtrapolationSet& set, const ControlProblem& problem);

Vector actor_derivative(const CriticState& critic, const ActorState& actor, const LearnerGains& gains,
                        const ExtrapolationSet& set, const ControlProblem& problem);

struct ExcitationSample {
    Matrix matrix;            ///< (1/N) sum_i omega_i omega_i' / rho_i^2
    double lambda_min = 0.0;  ///< clamped at zero; the matrix is PSD by construction
};

ExcitationSample excitation_metrics(const ExtrapolationSet& set, const ActorState& actor,
                                    const ControlProblem& problem, const LearnerGains& gains);

/// Smallest eigenvalue of a symmetric matrix, clamped at zero.
double psd_lambda_min(const Matrix& m);

/// Sliding-window trapezoidal integral of excitation matrices.
class ExcitationWindow {
public:
    explicit ExcitationWindow(double window);

    void add(double t, const Matrix& sample);

    /// True once the retained samples span the full window length.
    bool complete() const;
    double lambda_min() const;
    const Matrix& integral() const noexcept { return integral_; }

private:
    struct Segment {
        double t_end;
        double span;
        Matrix area;
    };

    double window_;
    std::deque<Segment> segments_;
    Matrix integral_;
    double covered_ = 0.0;
    double last_t_ = 0.0;
    Matrix last_sample_;
    bool has_last_ = false;
};

}  // namespace ofmbrl

#endif  // OFMBRL_LEARNER_HPP
