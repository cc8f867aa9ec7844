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

#include "ofmbrl/verifier.hpp"

#include "ofmbrl/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ofmbrl {

void VerificationReport::append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed || !c.hard; });
}

const Check* VerificationReport::find(const std::string& id) const {
    for (const Check& c : checks) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

std::string VerificationReport::to_text() const {
    std::ostringstream out;
    for (const Check& c : checks) {
        const char* status = c.passed ? "PASS" : (c.hard ? "FAIL" : "WARN");
        out << status << "  " << c.id << "  measured=" << format_double(c.measured)
            << " tolerance=" << format_double(c.tolerance) << "  [" << c.samples << "]";
        if (!c.detail.empty()) out << "  " << c.detail;
        out << '\n';
    }
    out << (passed() ? "verification passed" : "verification FAILED") << '\n';
    return out.str();
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json out;
    out["passed"] = passed();
    out["checks"] = nlohmann::json::array();
    for (const Check& c : checks) {
        out["checks"].push_back({{"id", c.id},
                                 {"passed", c.passed},
                                 {"hard", c.hard},
                                 {"measured", c.measured},
                                 {"tolerance", c.tolerance},
                                 {"samples", c.samples},
                                 {"detail", c.detail}});
    }
    return out;
}

std::vector<Vector> GridSpec::points(int dim) const {
    if (count < 1) throw std::invalid_argument("grid count must be positive");
    std::vector<Vector> out;
    std::vector<int> index(static_cast<std::size_t>(dim), 0);
    auto node = [this](int i) { return count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1); };
    while (true) {
        Vector x(dim);
        for (int d = 0; d < dim; ++d) x(d) = node(index[d]);
        out.push_back(x);
        int d = dim - 1;
        while (d >= 0 && ++index[d] == count) index[d--] = 0;
        if (d < 0) break;
    }
    return out;
}

std::string GridSpec::describe(int dim) const {
    std::ostringstream out;
    out << count;
    for (int d = 1; d < dim; ++d) out << "x" << count;
    out << " grid over [" << format_double(lo) << "," << format_double(hi) << "]^" << dim;
    return out.str();
}

std::vector<Vector> random_ball_points(int dim, int count, double radius, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-radius, radius);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        Vector x(dim);
        for (int d = 0; d < dim; ++d) x(d) = uniform(rng);
        if (x.norm() <= radius) out.push_back(x);
    }
    return out;
}

VerificationReport hjb_sweep(const SystemModel& model, const CostSpec& cost, const ScalarField& V,
                             const GridSpec& grid, double tolerance, const std::string& id) {
    double worst = 0.0;
    Vector worst_at = Vector::Zero(model.state_dim());
    for (const Vector& x : grid.points(model.state_dim())) {
        const double res = std::abs(hjb_residual(model, cost, V, x));
        if (!(res <= worst)) {
            worst = res;
            worst_at = x;
        }
    }
    std::ostringstream detail;
    detail << "worst at [";
    for (Eigen::Index i = 0; i < worst_at.size(); ++i) detail << (i ? "," : "") << format_double(worst_at(i));
    detail << "]";
    VerificationReport report;
    report.add(Check{id, worst <= tolerance, worst, tolerance, grid.describe(model.state_dim()), true, detail.str()});
    return report;
}

Check jacobian_check(const std::string& id, const std::function<Vector(const Vector&)>& f,
                     const std::function<Matrix(const Vector&)>& jacobian, const std::vector<Vector>& points,
                     double tolerance, double step) {
    double worst = 0.0;
    for (const Vector& x : points) {
        const Matrix analytic = jacobian(x);
        Matrix fd(analytic.rows(), analytic.cols());
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            Vector plus = x;
            Vector minus = x;
            plus(k) += step;
            minus(k) -= step;
            fd.col(k) = (f(plus) - f(minus)) / (2.0 * step);
        }
        const double err = (analytic - fd).norm() / std::max(1.0, analytic.norm());
        if (!(err <= worst)) worst = err;
    }
    return Check{id, worst <= tolerance, worst, tolerance, std::to_string(points.size()) + " points", true, ""};
}

Check check_basis_gradient(const Basis& basis, const std::vector<Vector>& points, double tolerance) {
    return jacobian_check(
        "basis_gradient:" + basis.name(), [&basis](const Vector& x) { return basis.eval(x); },
        [&basis](const Vector& x) { return basis.jacobian(x); }, points, tolerance);
}

Check check_value_gradient(const std::string& id, const ScalarField& V, const std::vector<Vector>& points,
                           double tolerance) {
    return jacobian_check(
        id, [&V](const Vector& x) { return Vector::Constant(1, V.value(x)); },
        [&V](const Vector& x) -> Matrix { return V.gradient(x).transpose(); }, points, tolerance);
}

Check bellman_identity_check(const ControlProblem& problem, const Vector& weights, const std::vector<Vector>& points,
                             double tolerance) {
    double worst = 0.0;
    for (const Vector& x : points) {
        const double d = std::abs(bellman_error(problem, weights, weights, x));
        if (!(d <= worst)) worst = d;
    }
    return Check{"bellman_identity", worst <= tolerance, worst, tolerance,
                 std::to_string(points.size()) + " points", true, "delta(W, W, x) at ideal weights"};
}

SimState reference_integrate(const SimConfig& config, const ControlProblem& problem, int refinement) {
    if (refinement < 1) throw std::invalid_argument("refinement must be positive");
    config.validate(problem);
    const ClosedLoop loop(problem, config);
    const SimState initial = loop.initial_state();

    const auto coarse = static_cast<long>(std::ceil(config.t_final / config.dt - 1e-9));
    const long steps = coarse * refinement;
    auto field = [&loop](double t, const Vector& y) { return loop.derivative(t, y); };
    const Vector y = euler_integrate(field, 0.0, loop.pack(initial), config.t_final, steps);
    if (!y.allFinite()) throw DivergenceError(config.t_final, "reference integration");
    return loop.unpack(config.t_final, y);
}

Check integrator_oracle_check(const SimConfig& config, const ControlProblem& problem, int refinement,
                              double tolerance) {
    SimConfig cfg = config;
    cfg.log_stride = std::max(1, static_cast<int>(std::ceil(cfg.t_final / cfg.dt)));
    const SimulationTrace trace = run(cfg, problem);
    const SimState reference = reference_integrate(cfg, problem, refinement);
    const double gap = (trace.final().x - reference.x).norm();
    std::ostringstream detail;
    detail << "RK4 dt=" << format_double(cfg.dt) << " vs Euler dt=" << format_double(cfg.dt / refinement);
    return Check{"integrator_oracle", gap <= tolerance, gap, tolerance,
                 "final plant state after " + format_double(cfg.t_final) + " s", true, detail.str()};
}

FilterSignal reconstruct_filter_signal(const SimulationTrace& trace, const EstimatorGains& gains) {
    const int n = trace.n;
    FilterSignal out;
    for (const TraceSample& s : trace.samples) {
        const Vector p_tilde = s.x.head(n) - s.x_hat.head(n);
        const Vector q_tilde = s.x.tail(n) - s.x_hat.tail(n);
        out.t.push_back(s.t);
        out.eta.push_back(s.eta);
        out.r.push_back(q_tilde + gains.alpha * p_tilde + s.eta);
    }
    return out;
}

namespace {

// Integral over [t[j-1], t[j]] of the quadratic through three neighbouring samples.
Vector interval_integral(const std::vector<double>& t, const std::vector<Vector>& f, std::size_t j) {
    const double a = t[j - 1];
    const double b = t[j];
    if (t.size() < 3) return 0.5 * (b - a) * (f[j - 1] + f[j]);
    const std::size_t c = (j + 1 < t.size()) ? j : j - 1;
    const double h0 = t[c - 1] - t[c];
    const double h1 = t[c + 1] - t[c];
    // f(s) = f_c + c1 s + c2 s^2 with s = t - t[c]
    const Vector d0 = (f[c - 1] - f[c]) / h0;
    const Vector d1 = (f[c + 1] - f[c]) / h1;
    const Vector c2 = (d1 - d0) / (h1 - h0);
    const Vector c1 = d0 - c2 * h0;
    const double sa = a - t[c];
    const double sb = b - t[c];
    return f[c] * (sb - sa) + c1 * (sb * sb - sa * sa) / 2.0 + c2 * (sb * sb * sb - sa * sa * sa) / 3.0;
}

}  // namespace

std::vector<Vector> eta_quadrature(const SimulationTrace& trace, const EstimatorGains& gains) {
    const int n = trace.n;
    std::vector<Vector> out;
    if (trace.samples.empty()) return out;

    auto p_tilde = [n](const TraceSample& s) -> Vector { return s.x.head(n) - s.x_hat.head(n); };
    std::vector<double> t;
    std::vector<Vector> integrand;
    for (const TraceSample& s : trace.samples) {
        t.push_back(s.t);
        integrand.push_back((gains.beta + gains.k) * s.eta + gains.k * gains.alpha * p_tilde(s));
    }

    const Vector start = (gains.k + gains.alpha) * p_tilde(trace.samples.front());
    Vector integral = Vector::Zero(n);
    out.push_back(start - (gains.k + gains.alpha) * p_tilde(trace.samples.front()));
    for (std::size_t j = 1; j < trace.samples.size(); ++j) {
        integral += interval_integral(t, integrand, j);
        out.push_back(start - integral - (gains.k + gains.alpha) * p_tilde(trace.samples[j]));
    }
    return out;
}

VerificationReport monitor_weight_convergence(const SimulationTrace& trace, const Vector& ideal, double tolerance,
                                              const std::vector<double>& thresholds) {
    VerificationReport report;
    if (trace.samples.empty()) throw std::invalid_argument("monitor_weight_convergence: empty trace");
    require_size(ideal, trace.L, "ideal weights");

    auto error = [&ideal](const Vector& w) { return (w - ideal).lpNorm<Eigen::Infinity>(); };
    const TraceSample& last = trace.final();
    const double critic = error(last.Wc);
    const double actor = error(last.Wa);
    const std::string at = "t=" + format_double(last.t);
    report.add(Check{"critic_weight_error", critic <= tolerance, critic, tolerance, at, true, "max-norm"});
    report.add(Check{"actor_weight_error", actor <= tolerance, actor, tolerance, at, true, "max-norm"});

    for (double threshold : thresholds) {
        for (const char* which : {"critic", "actor"}) {
            const bool is_critic = which[0] == 'c';
            double first = -1.0;
            for (const TraceSample& s : trace.samples) {
                if (error(is_critic ? s.Wc : s.Wa) < threshold) {
                    first = s.t;
                    break;
                }
            }
            report.add(Check{std::string(which) + "_first_passage_" + format_double(threshold), first >= 0.0, first,
                             threshold, "whole trace", false, first >= 0.0 ? "seconds" : "never reached"});
        }
    }
    return report;
}

Check lyapunov_decrease_check(const SimulationTrace& trace, const SystemModel& model, const Vector& ideal,
                              double skip, double tolerance) {
    auto surrogate = [&](const TraceSample& s) {
        const double v = model.has_analytic_value() ? model.analytic_value(s.x) : 0.0;
        return v + 0.5 * (s.Wc - ideal).squaredNorm() + 0.5 * (s.Wa - ideal).squaredNorm();
    };
    double worst = 0.0;
    bool have_prev = false;
    double prev = 0.0;
    for (const TraceSample& s : trace.samples) {
        if (s.t < skip) continue;
        const double cur = surrogate(s);
        if (have_prev) worst = std::max(worst, cur - prev);
        prev = cur;
        have_prev = true;
    }
    return Check{"lyapunov_decrease", worst <= tolerance, worst, tolerance,
                 "samples with t >= " + format_double(skip), false, "largest per-sample increase"};
}

VerificationReport verification_suite(const ControlProblem& problem, const SimConfig& config, const Vector& ideal,
                                      const SuiteOptions& options) {
    const SystemModel& model = problem.model;
    const int dim = model.state_dim();
    require_size(ideal, problem.basis.size(), "ideal weights");

    VerificationReport report;
    report.append(hjb_sweep(model, problem.cost, approximated_value(problem.basis, ideal), options.hjb_grid, 1e-9,
                            "hjb_ideal_weights"));
    if (model.has_analytic_value()) {
        report.append(
            hjb_sweep(model, problem.cost, analytic_value_field(model), options.hjb_grid, 1e-9, "hjb_analytic_value"));
    }

    const std::vector<Vector> random =
        random_ball_points(dim, options.random_points, options.random_radius, options.seed);
    std::vector<Vector> be_points = config.extrapolation.points;
    be_points.insert(be_points.end(), random.begin(), random.end());
    report.add(bellman_identity_check(problem, ideal, be_points, 1e-9));

    report.add(check_basis_gradient(problem.basis, random));
    if (model.has_analytic_value()) {
        report.add(check_value_gradient("analytic_value_gradient", analytic_value_field(model), random));
    }

    std::vector<Vector> nonzero;
    for (const Vector& x : random) {
        if (x.lpNorm<Eigen::Infinity>() > 0.0) nonzero.push_back(x);
    }
    const AssumptionReport assumption = check_assumption1(problem.cost, model, nonzero);
    report.add(Check{"cost_assumption", assumption.passed, static_cast<double>(assumption.counterexamples.size()), 0.0,
                     std::to_string(nonzero.size()) + " random states", true, "counterexample count"});

    SimConfig oracle = config;
    oracle.t_final = std::min(config.t_final, options.oracle_horizon);
    report.add(integrator_oracle_check(oracle, problem, options.oracle_refinement, options.oracle_tolerance));

    const ExcitationSample exc =
        excitation_metrics(config.extrapolation, ActorState{config.Wa0}, problem, config.learner);
    report.add(Check{"excitation_initial", exc.lambda_min > 0.0, exc.lambda_min, 0.0,
                     std::to_string(config.extrapolation.size()) + " extrapolation points", false,
                     exc.lambda_min > 0.0 ? "" : "lambda_min = 0: extrapolation set is rank deficient"});
    return report;
}

}  // namespace ofmbrl
