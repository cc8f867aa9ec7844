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

#include "ofmbrl/integrators.hpp"
#include "ofmbrl/verifier.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace ofmbrl;

namespace {

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

ControlProblem benchmark_problem() { return ControlProblem(benchmark_model(), benchmark_cost(), quadratic2d_basis()); }

SimulationTrace weight_trace(const std::vector<std::pair<double, Vector>>& weights) {
    SimulationTrace trace;
    trace.n = 1;
    trace.m = 1;
    trace.L = 3;
    for (const auto& [t, w] : weights) {
        TraceSample s;
        s.t = t;
        s.x = Vector::Zero(2);
        s.x_hat = Vector::Zero(2);
        s.eta = Vector::Zero(1);
        s.u = Vector::Zero(1);
        s.Wc = w;
        s.Wa = w;
        trace.samples.push_back(s);
    }
    return trace;
}

}  // namespace

TEST_CASE("grid points") {
    const GridSpec grid{-1.0, 1.0, 3};
    const auto pts = grid.points(2);
    REQUIRE(pts.size() == 9);
    CHECK(pts.front() == vec({-1, -1}));
    CHECK(pts[1] == vec({-1, 0}));
    CHECK(pts.back() == vec({1, 1}));
    CHECK(grid.describe(2) == "3x3 grid over [-1,1]^2");

    const auto single = GridSpec{0.5, 0.5, 1}.points(2);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == vec({0.5, 0.5}));
}

TEST_CASE("random ball points are reproducible and bounded") {
    const auto a = random_ball_points(2, 100, 2.0, 7);
    const auto b = random_ball_points(2, 100, 2.0, 7);
    const auto c = random_ball_points(2, 100, 2.0, 8);
    REQUIRE(a.size() == 100);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK(a[i].norm() <= 2.0);
        differs = differs || a[i] != c[i];
    }
    CHECK(differs);
}

TEST_CASE("HJB sweep") {
    const SystemModel model = benchmark_model();
    const CostSpec cost = benchmark_cost();
    const Basis basis = quadratic2d_basis();

    SUBCASE("ideal weights pass on the default grid") {
        const VerificationReport r = hjb_sweep(model, cost, approximated_value(basis, vec({1, 0, 1})), GridSpec{});
        CHECK(r.passed());
        CHECK(r.checks[0].measured <= 1e-9);
        CHECK(r.checks[0].samples == "21x21 grid over [-2,2]^2");
    }
    SUBCASE("scaled value fails with the expected residual") {
        const VerificationReport r =
            hjb_sweep(model, cost, approximated_value(basis, vec({2, 0, 2})), GridSpec{1.0, 1.0, 1});
        CHECK_FALSE(r.passed());
        CHECK(r.checks[0].measured == doctest::Approx(std::abs(oracle::kHjbDoubleScaleAt11)).epsilon(1e-13));
        CHECK(r.checks[0].detail == "worst at [1,1]");
    }
    SUBCASE("initial weights fail on the grid but not at the origin") {
        const ScalarField V = approximated_value(basis, vec({0.5, 0.5, 0.5}));
        CHECK_FALSE(hjb_sweep(model, cost, V, GridSpec{}).passed());
        CHECK(hjb_sweep(model, cost, V, GridSpec{0.0, 0.0, 1}).passed());
    }
}

TEST_CASE("Jacobian check detects a wrong derivative") {
    const auto pts = random_ball_points(2, 20, 2.0, 3);
    const Basis basis = quadratic2d_basis();
    CHECK(check_basis_gradient(basis, pts).passed);

    auto f = [](const Vector& x) { return Vector::Constant(1, x(0) * x(0) + x(1)); };
    auto wrong = [](const Vector& x) {
        Matrix J(1, 2);
        J << 2.0 * x(0), 1.1;
        return J;
    };
    const Check c = jacobian_check("wrong", f, wrong, pts);
    CHECK_FALSE(c.passed);
    CHECK(c.measured > 0.01);
}

TEST_CASE("Bellman identity") {
    const ControlProblem problem = benchmark_problem();
    const auto pts = GridSpec{-1.0, 1.0, 5}.points(2);
    CHECK(bellman_identity_check(problem, vec({1, 0, 1}), pts).passed);
    // zero weights leave only the state cost q^2
    const Check bad = bellman_identity_check(problem, vec({0, 0, 0}), {vec({1, 2})});
    CHECK_FALSE(bad.passed);
    CHECK(bad.measured == 4.0);
}

TEST_CASE("Euler reference integrator") {
    SUBCASE("scalar decay") {
        auto rhs = [](double, const Vector& y) -> Vector { return -y; };
        const Vector y = euler_integrate(rhs, 0.0, Vector::Constant(1, 1.0), 1.0, 100000);
        CHECK(std::abs(y(0) - std::exp(-1.0)) < 1e-5);
    }
    SUBCASE("zero dynamics") {
        SystemModel zero("zero", 1, 1, [](const Vector&) { return Vector::Zero(1); },
                         [](const Vector&) { return Matrix::Zero(1, 1); });
        const ControlProblem problem(zero, benchmark_cost(), quadratic2d_basis());
        SimConfig cfg = benchmark_sim_config();
        cfg.x0 = Vector::Zero(2);
        cfg.x_hat0 = Vector::Zero(2);
        cfg.Wc0 = Vector::Zero(3);
        cfg.Wa0 = Vector::Zero(3);
        cfg.learning = false;
        cfg.t_final = 0.1;
        const SimState s = reference_integrate(cfg, problem, 4);
        CHECK(s.t == doctest::Approx(0.1));
        CHECK(s.x.norm() == 0.0);
        CHECK(s.estimator.x_hat().norm() == 0.0);
        CHECK(s.critic.Gamma == cfg.Gamma0);
        CHECK(s.cost == 0.0);
    }
    SUBCASE("benchmark agrees with RK4 over a short horizon") {
        const ControlProblem problem = benchmark_problem();
        SimConfig cfg = benchmark_sim_config();
        cfg.t_final = 1.0;
        const Check c = integrator_oracle_check(cfg, problem, 10);
        CHECK(c.passed);
        CHECK(c.measured > 0.0);
    }
}

TEST_CASE("filter signal reconstruction") {
    const ControlProblem problem = benchmark_problem();
    SimConfig cfg = benchmark_sim_config();
    cfg.t_final = 10.0;
    const SimulationTrace trace = run(cfg, problem);

    const FilterSignal sig = reconstruct_filter_signal(trace, cfg.estimator);
    REQUIRE(sig.r.size() == trace.samples.size());
    // r(0) = q~(0) + alpha p~(0) + eta(0), eta(0) = 0
    CHECK(sig.r[0](0) == doctest::Approx(2.0 + 0.2 * 2.0).epsilon(1e-15));
    CHECK(std::abs(sig.r.back()(0)) < 1e-3);

    const std::vector<Vector> eta = eta_quadrature(trace, cfg.estimator);
    REQUIRE(eta.size() == trace.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) worst = std::max(worst, (eta[i] - trace.samples[i].eta).norm());
    CHECK(worst <= 1e-6);
}

TEST_CASE("weight convergence monitor") {
    const Vector ideal = vec({1, 0, 1});
    SUBCASE("converging trace") {
        const SimulationTrace trace =
            weight_trace({{0.0, vec({0.5, 0.5, 0.5})}, {1.0, vec({0.95, 0.0, 1.0})}, {2.0, vec({1.0, 0.005, 1.0})}});
        const VerificationReport r = monitor_weight_convergence(trace, ideal);
        CHECK(r.passed());
        CHECK(r.find("critic_weight_error")->measured == doctest::Approx(0.005));
        CHECK(r.find("critic_first_passage_0.1")->measured == 1.0);
        CHECK(r.find("actor_first_passage_0.01")->measured == 2.0);
    }
    SUBCASE("all-zero trace") {
        const SimulationTrace trace = weight_trace({{0.0, Vector::Zero(3)}, {1.0, Vector::Zero(3)}});
        const VerificationReport r = monitor_weight_convergence(trace, ideal);
        CHECK_FALSE(r.passed());
        CHECK(r.find("critic_weight_error")->measured == 1.0);
        CHECK(r.find("actor_weight_error")->measured == 1.0);
        const Check* passage = r.find("critic_first_passage_0.1");
        REQUIRE(passage != nullptr);
        CHECK_FALSE(passage->passed);
        CHECK_FALSE(passage->hard);
        CHECK(passage->detail == "never reached");
    }
    SUBCASE("wrong weight dimension") {
        const SimulationTrace trace = weight_trace({{0.0, Vector::Zero(3)}});
        CHECK_THROWS_AS(monitor_weight_convergence(trace, vec({1, 0})), ShapeError);
    }
}

TEST_CASE("report rendering") {
    VerificationReport r;
    r.add(Check{"a", true, 1e-12, 1e-9, "grid", true, ""});
    r.add(Check{"b", false, 0.5, 0.1, "t=1", false, "advisory"});
    CHECK(r.passed());
    CHECK(r.to_text() ==
          "PASS  a  measured=1e-12 tolerance=1e-09  [grid]\n"
          "WARN  b  measured=0.5 tolerance=0.1  [t=1]  advisory\n"
          "verification passed\n");
    const nlohmann::json j = r.to_json();
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == 2);
    CHECK(j["checks"][1]["hard"] == false);

    r.add(Check{"c", false, 2.0, 1.0, "x", true, ""});
    CHECK_FALSE(r.passed());
    CHECK(r.to_json()["passed"] == false);
    CHECK(r.find("missing") == nullptr);
}

TEST_CASE("benchmark verification suite passes") {
    const ControlProblem problem = benchmark_problem();
    const VerificationReport r = verification_suite(problem, benchmark_sim_config(), vec({1, 0, 1}));
    CHECK(r.passed());
    for (const char* id : {"hjb_ideal_weights", "hjb_analytic_value", "bellman_identity", "analytic_value_gradient",
                           "cost_assumption", "integrator_oracle"}) {
        const Check* c = r.find(id);
        REQUIRE_MESSAGE(c != nullptr, id);
        CHECK_MESSAGE(c->passed, id);
    }
}
