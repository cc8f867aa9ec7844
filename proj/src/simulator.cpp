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

#include "ofmbrl/simulator.hpp"

#include "ofmbrl/integrators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace ofmbrl {

void SimConfig::validate(const ControlProblem& problem) const {
    const int n2 = problem.model.state_dim();
    const int L = problem.basis.size();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be nonnegative");
    if (log_stride < 1) throw std::invalid_argument("log_stride must be at least 1");
    require_size(x0, n2, "x0");
    require_size(x_hat0, n2, "x_hat0");
    require_size(Wc0, L, "Wc0");
    require_size(Wa0, L, "Wa0");
    require_shape(Gamma0, L, L, "Gamma0");
    if (!Gamma0.isApprox(Gamma0.transpose(), 1e-12)) throw std::invalid_argument("Gamma0 must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Gamma0, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 0.0) throw std::invalid_argument("Gamma0 must be positive definite");
    if (extrapolation.points.empty()) throw std::invalid_argument("extrapolation set is empty");
    for (const Vector& p : extrapolation.points) require_size(p, n2, "extrapolation point");
    if (!(excitation_window > 0.0)) throw std::invalid_argument("excitation_window must be positive");
}

SimConfig benchmark_sim_config() {
    SimConfig config;
    config.x0 = Vector::Constant(2, 1.0);
    config.x_hat0 = Vector::Constant(2, -1.0);
    config.Wc0 = Vector::Constant(3, 0.5);
    config.Wa0 = Vector::Constant(3, 0.5);
    config.Gamma0 = 50.0 * Matrix::Identity(3, 3);
    config.extrapolation = ExtrapolationSet::grid(2, 1.0, 5);
    return config;
}

ClosedLoop::ClosedLoop(const ControlProblem& problem, const SimConfig& config)
    : problem_(problem),
      config_(config),
      n_(problem.model.n()),
      L_(problem.basis.size()),
      dim_(5 * problem.model.n() + 2 * problem.basis.size() + problem.basis.size() * problem.basis.size() + 1) {}

SimState ClosedLoop::initial_state() const {
    SimState state;
    state.t = 0.0;
    state.x = config_.x0;
    state.estimator = init_estimator(config_.x_hat0, config_.x0.head(n_), config_.estimator);
    state.critic = CriticState{config_.Wc0, config_.Gamma0};
    state.actor = ActorState{config_.Wa0};
    state.cost = 0.0;
    return state;
}

Vector ClosedLoop::pack(const SimState& s) const {
    Vector y(dim_);
    Eigen::Index o = 0;
    y.segment(o, 2 * n_) = s.x;
    o += 2 * n_;
    y.segment(o, n_) = s.estimator.p_hat;
    o += n_;
    y.segment(o, n_) = s.estimator.q_hat;
    o += n_;
    y.segment(o, n_) = s.estimator.z_aux;
    o += n_;
    y.segment(o, L_) = s.critic.Wc;
    o += L_;
    y.segment(o, L_ * L_) = s.critic.Gamma.reshaped();
    o += L_ * L_;
    y.segment(o, L_) = s.actor.Wa;
    o += L_;
    y(o) = s.cost;
    return y;
}

SimState ClosedLoop::unpack(double t, const Vector& y) const {
    require_size(y, dim_, "closed-loop state");
    SimState s;
    s.t = t;
    Eigen::Index o = 0;
    s.x = y.segment(o, 2 * n_);
    o += 2 * n_;
    s.estimator.p_hat = y.segment(o, n_);
    o += n_;
    s.estimator.q_hat = y.segment(o, n_);
    o += n_;
    s.estimator.z_aux = y.segment(o, n_);
    o += n_;
    s.critic.Wc = y.segment(o, L_);
    o += L_;
    s.critic.Gamma = y.segment(o, L_ * L_).reshaped(L_, L_);
    o += L_ * L_;
    s.actor.Wa = y.segment(o, L_);
    o += L_;
    s.cost = y(o);
    return s;
}

Vector ClosedLoop::control(double t, const EstimatorState& estimator, const ActorState& actor) const {
    Vector u = policy_hat(problem_.model, problem_.cost, problem_.basis, actor.Wa, estimator.x_hat());
    if (config_.probe) u += config_.probe(t);
    return u;
}

namespace {

void require_finite(const Vector& v, double t, const char* subsystem) {
    if (!v.allFinite()) throw DivergenceError(t, subsystem);
}

}  // namespace

Vector ClosedLoop::derivative(double t, const Vector& y) const {
    const SimState s = unpack(t, y);
    const Vector p_measured = s.x.head(n_);
    const Vector u = control(t, s.estimator, s.actor);
    require_finite(u, t, "control");

    Vector plant_rate(2 * n_);
    plant_rate << s.x.tail(n_), problem_.model.drift(s.x) + problem_.model.effectiveness(s.x) * u;
    require_finite(plant_rate, t, "plant");

    const EstimatorRates est = estimator_derivatives(s.estimator, config_.estimator, problem_.model, p_measured, u);
    require_finite(est.p_hat, t, "estimator");
    require_finite(est.q_hat, t, "estimator");
    require_finite(est.z_aux, t, "estimator");

    LearnerRates learn{Vector::Zero(L_), Matrix::Zero(L_, L_), Vector::Zero(L_)};
    if (config_.learning) {
        try {
            learn = learner_derivatives(s.critic, s.actor, config_.learner, config_.extrapolation, problem_);
        } catch (const NumericalError& e) {
            throw DivergenceError(t, "learner (extrapolation point " + std::to_string(e.point_index()) + ")");
        }
        require_finite(learn.Wc, t, "critic");
        if (!learn.Gamma.allFinite()) throw DivergenceError(t, "gain matrix");
        require_finite(learn.Wa, t, "actor");
    }

    const double r = running_cost(problem_.cost, s.x, u);
    if (!std::isfinite(r)) throw DivergenceError(t, "cost");

    Vector dy(dim_);
    dy << plant_rate, est.p_hat, est.q_hat, est.z_aux, learn.Wc, learn.Gamma.reshaped(), learn.Wa, r;
    return dy;
}

namespace {

SimState advance(const ClosedLoop& loop, const SimState& state, double h) {
    auto field = [&loop](double t, const Vector& y) { return loop.derivative(t, y); };
    const Vector y = rk4_step(field, state.t, loop.pack(state), h);
    SimState next = loop.unpack(state.t + h, y);
    next.critic.Gamma = 0.5 * (next.critic.Gamma + next.critic.Gamma.transpose()).eval();
    if (!y.allFinite()) throw DivergenceError(next.t, "integrated state");
    return next;
}

TraceSample make_sample(const ClosedLoop& loop, const SimState& s, const SimConfig& config,
                        const ControlProblem& problem, Matrix* excitation) {
    const int n = problem.model.n();
    TraceSample sample;
    sample.t = s.t;
    sample.x = s.x;
    sample.x_hat = s.estimator.x_hat();
    sample.eta = eta_of(s.estimator, config.estimator, s.x.head(n) - s.estimator.p_hat);
    sample.Wc = s.critic.Wc;
    sample.Wa = s.actor.Wa;
    sample.u = loop.control(s.t, s.estimator, s.actor);
    sample.delta_t = bellman_error(problem, s.critic.Wc, s.actor.Wa, sample.x_hat);
    const ExcitationSample exc = excitation_metrics(config.extrapolation, s.actor, problem, config.learner);
    sample.lambda_min = exc.lambda_min;
    if (excitation) *excitation = exc.matrix;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s.critic.Gamma, Eigen::EigenvaluesOnly);
    sample.gamma_min = eig.eigenvalues().minCoeff();
    sample.gamma_max = eig.eigenvalues().maxCoeff();
    sample.cost = s.cost;
    return sample;
}

}  // namespace

SimState step(const SimState& state, const SimConfig& config, const ControlProblem& problem) {
    const ClosedLoop loop(problem, config);
    return advance(loop, state, config.dt);
}

SimulationTrace run(const SimConfig& config, const ControlProblem& problem) {
    config.validate(problem);
    const ClosedLoop loop(problem, config);

    SimulationTrace trace;
    trace.n = problem.model.n();
    trace.m = problem.model.m();
    trace.L = problem.basis.size();

    ExcitationWindow window(config.excitation_window);
    bool excited = false;
    auto log = [&](const SimState& s) {
        Matrix excitation;
        trace.samples.push_back(make_sample(loop, s, config, problem, &excitation));
        excited = excited || trace.samples.back().lambda_min >= config.excitation_floor;
        window.add(s.t, excitation);
        if (window.complete()) {
            const double lam = window.lambda_min();
            trace.windowed_lambda_min =
                trace.windowed_lambda_min < 0.0 ? lam : std::min(trace.windowed_lambda_min, lam);
        }
    };

    SimState state = loop.initial_state();
    log(state);

    const auto steps = static_cast<long>(std::ceil(config.t_final / config.dt - 1e-9));
    for (long i = 0; i < steps; ++i) {
        const double t_i = static_cast<double>(i) * config.dt;
        const double h = std::min(config.dt, config.t_final - t_i);
        state.t = t_i;
        state = advance(loop, state, h);
        if ((i + 1) % config.log_stride == 0 || i + 1 == steps) log(state);
    }

    if (!excited) {
        trace.warnings.push_back("excitation lambda_min stayed below " + format_double(config.excitation_floor) +
                                 " for the whole run");
    }
    return trace;
}

double accumulate_cost(const SimulationTrace& trace, const CostSpec& cost) {
    if (trace.samples.empty()) throw std::invalid_argument("accumulate_cost: empty trace");
    double total = 0.0;
    double prev = running_cost(cost, trace.samples.front().x, trace.samples.front().u);
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
        const TraceSample& s = trace.samples[i];
        const double cur = running_cost(cost, s.x, s.u);
        total += 0.5 * (s.t - trace.samples[i - 1].t) * (prev + cur);
        prev = cur;
    }
    return total;
}

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::vector<std::string> trace_columns(const SimulationTrace& trace) {
    std::vector<std::string> cols{"t"};
    const int n2 = 2 * trace.n;
    for (int i = 1; i <= n2; ++i) cols.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n2; ++i) cols.push_back("xhat" + std::to_string(i));
    for (int i = 1; i <= trace.L; ++i) cols.push_back("wc" + std::to_string(i));
    for (int i = 1; i <= trace.L; ++i) cols.push_back("wa" + std::to_string(i));
    if (trace.m == 1) {
        cols.push_back("u");
    } else {
        for (int i = 1; i <= trace.m; ++i) cols.push_back("u" + std::to_string(i));
    }
    for (const char* c : {"delta_t", "lam_min", "gamma_min", "gamma_max", "J"}) cols.emplace_back(c);
    return cols;
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& out) {
    const auto cols = trace_columns(trace);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';

    std::string line;
    auto put = [&line](double v) {
        if (!line.empty()) line += ',';
        line += format_double(v);
    };
    auto put_all = [&put](const Vector& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) put(v(i));
    };
    for (const TraceSample& s : trace.samples) {
        line.clear();
        put(s.t);
        put_all(s.x);
        put_all(s.x_hat);
        put_all(s.Wc);
        put_all(s.Wa);
        put_all(s.u);
        put(s.delta_t);
        put(s.lambda_min);
        put(s.gamma_min);
        put(s.gamma_max);
        put(s.cost);
        out << line << '\n';
    }
}

std::string trace_csv(const SimulationTrace& trace) {
    std::ostringstream out;
    write_trace_csv(trace, out);
    return out.str();
}

}  // namespace ofmbrl
