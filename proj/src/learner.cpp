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

#include "ofmbrl/learner.hpp"

#include <cmath>
#include <string>

namespace ofmbrl {

ControlProblem::ControlProblem(SystemModel model_, CostSpec cost_, Basis basis_)
    : model(std::move(model_)), cost(std::move(cost_)), basis(std::move(basis_)) {
    if (basis.state_dim() != model.state_dim()) throw ShapeError("basis state dimension does not match model");
    if (cost.m() != model.m()) throw ShapeError("cost control dimension does not match model");
}

void LearnerGains::validate() const {
    if (!(kc > 0.0) || !(ka1 > 0.0) || !(ka2 > 0.0) || !(gamma1 > 0.0) || !(beta_forget > 0.0)) {
        throw std::invalid_argument("learner gains must be strictly positive");
    }
}

ExtrapolationSet ExtrapolationSet::grid(int dim, double extent, int count) {
    if (dim <= 0 || count <= 0) throw std::invalid_argument("extrapolation grid: dim and count must be positive");
    if (!(extent >= 0.0)) throw std::invalid_argument("extrapolation grid: extent must be nonnegative");

    std::vector<double> axis(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        axis[i] = count == 1 ? 0.0 : -extent + 2.0 * extent * i / (count - 1);
    }

    ExtrapolationSet set;
    std::vector<int> index(static_cast<std::size_t>(dim), 0);
    while (true) {
        Vector point(dim);
        for (int d = 0; d < dim; ++d) point(d) = axis[index[d]];
        set.points.push_back(point);

        int d = dim - 1;
        while (d >= 0 && ++index[d] == count) index[d--] = 0;
        if (d < 0) break;
    }
    return set;
}

namespace {

struct PointTerms {
    Vector omega;
    double rho;
    double delta;
    Vector u;
    Matrix sigma_q;
};

PointTerms point_terms(const ControlProblem& problem, const Vector& Wc, const Vector& Wa, const Vector& x,
                       double gamma1) {
    const int n = problem.model.n();
    const Matrix jac = problem.basis.jacobian(x);
    const Vector u = policy_from_gradient(problem.model, problem.cost, x, jac.transpose() * Wa);
    const Vector accel = problem.model.drift(x) + problem.model.effectiveness(x) * u;

    PointTerms terms;
    terms.sigma_q = jac.rightCols(n);
    terms.omega = jac.leftCols(n) * x.tail(n) + terms.sigma_q * accel;
    terms.rho = 1.0 + gamma1 * terms.omega.squaredNorm();
    terms.u = u;
    terms.delta = Wc.size() == 0 ? 0.0 : Wc.dot(terms.omega) + running_cost(problem.cost, x, u);
    return terms;
}

void check_dims(const ControlProblem& problem, const CriticState& critic, const ActorState& actor) {
    const int L = problem.basis.size();
    require_size(critic.Wc, L, "critic weights");
    require_shape(critic.Gamma, L, L, "critic gain matrix");
    require_size(actor.Wa, L, "actor weights");
}

}  // namespace

Regressor regressor(const ControlProblem& problem, const Vector& Wa, const Vector& x, double gamma1) {
    require_size(Wa, problem.basis.size(), "regressor actor weights");
    const PointTerms terms = point_terms(problem, Vector(), Wa, x, gamma1);
    return Regressor{terms.omega, terms.rho};
}

double bellman_error(const ControlProblem& problem, const Vector& Wc, const Vector& Wa, const Vector& x) {
    require_size(Wc, problem.basis.size(), "bellman_error critic weights");
    require_size(Wa, problem.basis.size(), "bellman_error actor weights");
    return point_terms(problem, Wc, Wa, x, 1.0).delta;
}

Matrix policy_curvature(const ControlProblem& problem, const Vector& x) {
    const Matrix sigma_q = problem.basis.jacobian(x).rightCols(problem.model.n());
    const Matrix g = problem.model.effectiveness(x);
    const Matrix b = sigma_q * g;
    return b * problem.cost.control_penalty_inverse() * b.transpose();
}

LearnerRates learner_derivatives(const CriticState& critic, const ActorState& actor, const LearnerGains& gains,
                                 const ExtrapolationSet& set, const ControlProblem& problem) {
    check_dims(problem, critic, actor);
    if (set.points.empty()) throw std::invalid_argument("extrapolation set is empty");

    const int L = problem.basis.size();
    const double N = static_cast<double>(set.size());
    const Matrix& r_inv = problem.cost.control_penalty_inverse();

    Vector weighted_error = Vector::Zero(L);
    Matrix information = Matrix::Zero(L, L);
    Vector actor_sum = Vector::Zero(L);

    for (std::size_t i = 0; i < set.size(); ++i) {
        const Vector& x = set.points[i];
        const PointTerms t = point_terms(problem, critic.Wc, actor.Wa, x, gains.gamma1);
        if (!t.omega.allFinite() || !std::isfinite(t.delta) || !std::isfinite(t.rho)) {
            throw NumericalError("non-finite Bellman error terms at extrapolation point " + std::to_string(i), i);
        }
        weighted_error += (t.delta / t.rho) * t.omega;
        information += (t.omega / (t.rho * t.rho)) * t.omega.transpose();

        const Matrix b = t.sigma_q * problem.model.effectiveness(x);
        const Matrix G = b * r_inv * b.transpose();
        actor_sum += (gains.kc * t.omega.dot(critic.Wc) / (4.0 * N * t.rho)) * (G.transpose() * actor.Wa);
    }

    const Matrix& gamma = critic.Gamma;
    LearnerRates rates;
    rates.Wc = -(gains.kc / N) * (gamma * weighted_error);
    rates.Gamma = gains.beta_forget * gamma - (gains.kc / N) * (gamma * information * gamma);
    if (gains.negate_actor_sum) actor_sum = -actor_sum;
    rates.Wa = -gains.ka1 * (actor.Wa - critic.Wc) - gains.ka2 * actor.Wa + actor_sum;
    return rates;
}

CriticRates critic_derivatives(const CriticState& critic, const ActorState& actor, const LearnerGains& gains,
                               const ExtrapolationSet& set, const ControlProblem& problem) {
    LearnerRates rates = learner_derivatives(critic, actor, gains, set, problem);
    return CriticRates{std::move(rates.Wc), std::move(rates.Gamma)};
}

Vector actor_derivative(const CriticState& critic, const ActorState& actor, const LearnerGains& gains,
                        const ExtrapolationSet& set, const ControlProblem& problem) {
    return learner_derivatives(critic, actor, gains, set, problem).Wa;
}

double psd_lambda_min(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    return std::max(0.0, eig.eigenvalues().minCoeff());
}

ExcitationSample excitation_metrics(const ExtrapolationSet& set, const ActorState& actor,
                                    const ControlProblem& problem, const LearnerGains& gains) {
    const int L = problem.basis.size();
    require_size(actor.Wa, L, "excitation actor weights");
    ExcitationSample sample;
    sample.matrix = Matrix::Zero(L, L);
    if (set.points.empty()) return sample;
    for (const Vector& x : set.points) {
        const Regressor reg = regressor(problem, actor.Wa, x, gains.gamma1);
        sample.matrix += (reg.omega / (reg.rho * reg.rho)) * reg.omega.transpose();
    }
    sample.matrix /= static_cast<double>(set.size());
    sample.lambda_min = psd_lambda_min(sample.matrix);
    return sample;
}

ExcitationWindow::ExcitationWindow(double window) : window_(window) {
    if (!(window > 0.0)) throw std::invalid_argument("excitation window must be positive");
}

void ExcitationWindow::add(double t, const Matrix& sample) {
    if (!has_last_) {
        integral_ = Matrix::Zero(sample.rows(), sample.cols());
        last_t_ = t;
        last_sample_ = sample;
        has_last_ = true;
        return;
    }
    const double span = t - last_t_;
    if (!(span > 0.0)) throw std::invalid_argument("excitation window samples must be increasing in time");
    Segment seg{t, span, 0.5 * span * (last_sample_ + sample)};
    integral_ += seg.area;
    covered_ += span;
    segments_.push_back(std::move(seg));
    last_t_ = t;
    last_sample_ = sample;

    // Drop whole segments that start before t - window.
    while (!segments_.empty() && covered_ - segments_.front().span >= window_ - 1e-12) {
        integral_ -= segments_.front().area;
        covered_ -= segments_.front().span;
        segments_.pop_front();
    }
}

bool ExcitationWindow::complete() const { return covered_ >= window_ - 1e-12; }

double ExcitationWindow::lambda_min() const { return has_last_ ? psd_lambda_min(integral_) : 0.0; }

}  // namespace ofmbrl
