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

#include "ofmbrl/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace ofmbrl {

using nlohmann::json;

namespace {

class Reader {
public:
    Reader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> known(keys.begin(), keys.end());
        for (const auto& item : obj_.items()) {
            if (!known.count(item.key())) throw ConfigError(key(item.key()), "unknown key");
        }
    }

    bool has(const char* name) const { return obj_.contains(name); }
    const json& at(const char* name) const { return obj_.at(name); }
    std::string key(const std::string& name) const { return prefix_.empty() ? name : prefix_ + "." + name; }

    void number(const char* name, double& out) const {
        if (!has(name)) return;
        const json& v = at(name);
        if (!v.is_number()) throw ConfigError(key(name), "expected a number");
        out = v.get<double>();
    }

    void integer(const char* name, int& out) const {
        if (!has(name)) return;
        const json& v = at(name);
        if (!v.is_number_integer()) throw ConfigError(key(name), "expected an integer");
        out = v.get<int>();
    }

    void boolean(const char* name, bool& out) const {
        if (!has(name)) return;
        const json& v = at(name);
        if (!v.is_boolean()) throw ConfigError(key(name), "expected true or false");
        out = v.get<bool>();
    }

    void string(const char* name, std::string& out) const {
        if (!has(name)) return;
        const json& v = at(name);
        if (!v.is_string()) throw ConfigError(key(name), "expected a string");
        out = v.get<std::string>();
    }

    void vector(const char* name, Vector& out) const {
        if (has(name)) out = to_vector(at(name), key(name));
    }

    void matrix(const char* name, Matrix& out) const {
        if (has(name)) out = to_matrix(at(name), key(name));
    }

    static Vector to_vector(const json& v, const std::string& key) {
        if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
        Vector out(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(key, "expected an array of numbers");
            out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
        }
        return out;
    }

    // A bare number s means s * I with the size fixed later by validation.
    static Matrix to_matrix(const json& v, const std::string& key) {
        if (v.is_number()) return Matrix::Constant(1, 1, v.get<double>());
        if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a number or a nonempty array of rows");
        const std::size_t rows = v.size();
        const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
        Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < rows; ++i) {
            if (!v[i].is_array() || v[i].size() != cols) throw ConfigError(key, "rows must be arrays of equal length");
            for (std::size_t j = 0; j < cols; ++j) {
                if (!v[i][j].is_number()) throw ConfigError(key, "expected numeric entries");
                out(i, j) = v[i][j].get<double>();
            }
        }
        return out;
    }

private:
    const json& obj_;
    std::string prefix_;
};

json vector_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json matrix_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
    return out;
}

Matrix expand_scalar(const Matrix& m, Eigen::Index size, bool was_scalar) {
    return was_scalar ? Matrix(m(0, 0) * Matrix::Identity(size, size)) : m;
}

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
    ScenarioConfig cfg;
    Reader root(doc, "");
    root.allow({"model", "basis", "cost", "simulation", "estimator", "learner", "analytic_weights", "output"});

    root.string("model", cfg.model);
    if (root.has("basis")) {
        const json& b = root.at("basis");
        if (b.is_string()) {
            cfg.basis = b.get<std::string>();
        } else if (b.is_array() && !b.empty()) {
            cfg.basis = "monomial";
            for (const json& row : b) {
                if (!row.is_array()) throw ConfigError("basis", "expected an identifier or a list of exponent lists");
                std::vector<int> exps;
                for (const json& e : row) {
                    if (!e.is_number_integer()) throw ConfigError("basis", "exponents must be integers");
                    exps.push_back(e.get<int>());
                }
                cfg.basis_exponents.push_back(std::move(exps));
            }
        } else {
            throw ConfigError("basis", "expected an identifier or a list of exponent lists");
        }
    }

    bool gamma_scalar = false;
    if (root.has("cost")) {
        Reader cost(root.at("cost"), "cost");
        cost.allow({"state_cost", "R"});
        cost.string("state_cost", cfg.state_cost);
        cost.matrix("R", cfg.R);
        if (cost.has("R") && cost.at("R").is_number()) cfg.R = expand_scalar(cfg.R, 1, true);
    }
    if (root.has("simulation")) {
        Reader sim(root.at("simulation"), "simulation");
        sim.allow({"t_final", "dt", "log_stride", "x0", "xhat0", "Wc0", "Wa0", "Gamma0", "learning",
                   "excitation_floor", "excitation_window"});
        sim.number("t_final", cfg.t_final);
        sim.number("dt", cfg.dt);
        sim.integer("log_stride", cfg.log_stride);
        sim.vector("x0", cfg.x0);
        sim.vector("xhat0", cfg.x_hat0);
        sim.vector("Wc0", cfg.Wc0);
        sim.vector("Wa0", cfg.Wa0);
        sim.matrix("Gamma0", cfg.Gamma0);
        gamma_scalar = sim.has("Gamma0") && sim.at("Gamma0").is_number();
        sim.boolean("learning", cfg.learning);
        sim.number("excitation_floor", cfg.excitation_floor);
        sim.number("excitation_window", cfg.excitation_window);
    }
    if (root.has("estimator")) {
        Reader est(root.at("estimator"), "estimator");
        est.allow({"k", "alpha", "beta"});
        est.number("k", cfg.estimator.k);
        est.number("alpha", cfg.estimator.alpha);
        est.number("beta", cfg.estimator.beta);
    }
    if (root.has("learner")) {
        Reader learn(root.at("learner"), "learner");
        learn.allow({"kc", "ka1", "ka2", "gamma1", "beta_forget", "negate_actor_sum", "nu", "grid"});
        learn.number("kc", cfg.learner.kc);
        learn.number("ka1", cfg.learner.ka1);
        learn.number("ka2", cfg.learner.ka2);
        learn.number("gamma1", cfg.learner.gamma1);
        learn.number("beta_forget", cfg.learner.beta_forget);
        learn.boolean("negate_actor_sum", cfg.learner.negate_actor_sum);
        if (learn.has("nu")) {
            double nu = 0.0;
            learn.number("nu", nu);
            cfg.nu = nu;
            cfg.warnings.push_back("learner.nu is accepted but does not enter any update law");
        }
        if (learn.has("grid")) {
            Reader grid(learn.at("grid"), "learner.grid");
            grid.allow({"extent", "count"});
            grid.number("extent", cfg.grid_extent);
            grid.integer("count", cfg.grid_count);
        }
    }
    if (root.has("analytic_weights")) cfg.analytic_weights = Reader::to_vector(root.at("analytic_weights"), "analytic_weights");
    if (root.has("output")) {
        Reader out(root.at("output"), "output");
        out.allow({"dir", "trace", "metrics"});
        out.string("dir", cfg.output_dir);
        out.string("trace", cfg.trace_file);
        out.string("metrics", cfg.metrics_file);
    }

    if (gamma_scalar) cfg.Gamma0 = expand_scalar(cfg.Gamma0, cfg.Wc0.size(), true);
    validate_scenario(cfg);
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read scenario file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON in '") + path + "': " + e.what());
    }
    return parse_scenario(doc);
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json doc;
    doc["model"] = cfg.model;
    if (cfg.basis_exponents.empty()) {
        doc["basis"] = cfg.basis;
    } else {
        doc["basis"] = cfg.basis_exponents;
    }
    doc["cost"] = {{"state_cost", cfg.state_cost}, {"R", matrix_json(cfg.R)}};
    doc["simulation"] = {{"t_final", cfg.t_final},
                         {"dt", cfg.dt},
                         {"log_stride", cfg.log_stride},
                         {"x0", vector_json(cfg.x0)},
                         {"xhat0", vector_json(cfg.x_hat0)},
                         {"Wc0", vector_json(cfg.Wc0)},
                         {"Wa0", vector_json(cfg.Wa0)},
                         {"Gamma0", matrix_json(cfg.Gamma0)},
                         {"learning", cfg.learning},
                         {"excitation_floor", cfg.excitation_floor},
                         {"excitation_window", cfg.excitation_window}};
    doc["estimator"] = {{"k", cfg.estimator.k}, {"alpha", cfg.estimator.alpha}, {"beta", cfg.estimator.beta}};
    doc["learner"] = {{"kc", cfg.learner.kc},
                      {"ka1", cfg.learner.ka1},
                      {"ka2", cfg.learner.ka2},
                      {"gamma1", cfg.learner.gamma1},
                      {"beta_forget", cfg.learner.beta_forget},
                      {"negate_actor_sum", cfg.learner.negate_actor_sum},
                      {"grid", {{"extent", cfg.grid_extent}, {"count", cfg.grid_count}}}};
    if (cfg.nu) doc["learner"]["nu"] = *cfg.nu;
    if (cfg.analytic_weights) doc["analytic_weights"] = vector_json(*cfg.analytic_weights);
    doc["output"] = {{"dir", cfg.output_dir}, {"trace", cfg.trace_file}, {"metrics", cfg.metrics_file}};
    return doc;
}

namespace {

void check_positive(double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be a positive finite number");
}

}  // namespace

void validate_scenario(const ScenarioConfig& cfg) {
    check_positive(cfg.dt, "simulation.dt");
    if (!(cfg.t_final >= 0.0) || !std::isfinite(cfg.t_final)) {
        throw ConfigError("simulation.t_final", "must be a nonnegative finite number");
    }
    if (cfg.log_stride < 1) throw ConfigError("simulation.log_stride", "must be at least 1");
    check_positive(cfg.excitation_window, "simulation.excitation_window");
    if (!(cfg.excitation_floor >= 0.0)) throw ConfigError("simulation.excitation_floor", "must be nonnegative");

    try {
        cfg.estimator.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("estimator", e.what());
    }
    if (cfg.learning) {
        try {
            cfg.learner.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("learner", e.what());
        }
    }
    check_positive(cfg.grid_extent, "learner.grid.extent");
    if (cfg.grid_count < 1) throw ConfigError("learner.grid.count", "must be at least 1");

    ControlProblem problem = build_problem(cfg);
    const int n2 = problem.model.state_dim();
    const int L = problem.basis.size();
    if (cfg.x0.size() != n2) throw ConfigError("simulation.x0", "expected " + std::to_string(n2) + " entries");
    if (cfg.x_hat0.size() != n2) throw ConfigError("simulation.xhat0", "expected " + std::to_string(n2) + " entries");
    if (cfg.Wc0.size() != L) throw ConfigError("simulation.Wc0", "expected " + std::to_string(L) + " entries");
    if (cfg.Wa0.size() != L) throw ConfigError("simulation.Wa0", "expected " + std::to_string(L) + " entries");
    if (cfg.Gamma0.rows() != L || cfg.Gamma0.cols() != L) {
        throw ConfigError("simulation.Gamma0", "expected a " + std::to_string(L) + "x" + std::to_string(L) + " matrix");
    }
    if (cfg.analytic_weights && cfg.analytic_weights->size() != L) {
        throw ConfigError("analytic_weights", "expected " + std::to_string(L) + " entries");
    }
    try {
        build_sim_config(cfg).validate(problem);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("simulation", e.what());
    }
}

ControlProblem build_problem(const ScenarioConfig& cfg) {
    SystemModel model = [&] {
        try {
            return model_by_id(cfg.model);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model", e.what());
        }
    }();

    Basis basis = [&] {
        try {
            if (!cfg.basis_exponents.empty()) return monomial_basis(cfg.basis_exponents, cfg.basis);
            return basis_by_id(cfg.basis);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("basis", e.what());
        }
    }();
    if (basis.state_dim() != model.state_dim()) throw ConfigError("basis", "state dimension does not match the model");

    const int n = model.n();
    const int n2 = model.state_dim();
    AssumptionCase assumption = AssumptionCase::VelocityDefinite;
    CostSpec::StateCostFn q;
    if (cfg.state_cost == "velocity_squared") {
        q = [n](const Vector& x) { return x.tail(n).squaredNorm(); };
    } else if (cfg.state_cost == "state_squared") {
        q = [n2](const Vector& x) { return x.head(n2).squaredNorm(); };
        assumption = AssumptionCase::PositiveDefinite;
    } else {
        throw ConfigError("cost.state_cost", "unknown state cost '" + cfg.state_cost + "'");
    }
    if (cfg.R.rows() != model.m() || cfg.R.cols() != model.m()) {
        throw ConfigError("cost.R", "expected a " + std::to_string(model.m()) + "x" + std::to_string(model.m()) + " matrix");
    }
    try {
        CostSpec cost(q, cfg.R, assumption);
        return ControlProblem(std::move(model), std::move(cost), std::move(basis));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("cost.R", e.what());
    }
}

SimConfig build_sim_config(const ScenarioConfig& cfg) {
    SimConfig sim;
    sim.t_final = cfg.t_final;
    sim.dt = cfg.dt;
    sim.log_stride = cfg.log_stride;
    sim.x0 = cfg.x0;
    sim.x_hat0 = cfg.x_hat0;
    sim.Wc0 = cfg.Wc0;
    sim.Wa0 = cfg.Wa0;
    sim.Gamma0 = cfg.Gamma0;
    sim.estimator = cfg.estimator;
    sim.learner = cfg.learner;
    sim.learning = cfg.learning;
    sim.excitation_floor = cfg.excitation_floor;
    sim.excitation_window = cfg.excitation_window;
    sim.extrapolation = ExtrapolationSet::grid(static_cast<int>(cfg.x0.size()), cfg.grid_extent, cfg.grid_count);
    return sim;
}

Vector ideal_weights(const ScenarioConfig& cfg, const ControlProblem& problem) {
    if (cfg.analytic_weights) return *cfg.analytic_weights;
    if (problem.model.analytic_weights() && problem.model.analytic_weights()->size() == problem.basis.size()) {
        return *problem.model.analytic_weights();
    }
    throw ConfigError("analytic_weights", "no ideal weights known for this model and basis");
}

}  // namespace ofmbrl
