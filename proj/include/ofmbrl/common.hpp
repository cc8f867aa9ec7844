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

#ifndef OFMBRL_COMMON_HPP
#define OFMBRL_COMMON_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ofmbrl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a vector or matrix argument has the wrong dimension.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a learner term evaluates to NaN/Inf at an extrapolation point.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t point_index)
        : std::runtime_error(what), point_index_(point_index) {}

    std::size_t point_index() const noexcept { return point_index_; }

private:
    std::size_t point_index_;
};

/// Raised when the closed-loop integration produces a non-finite value.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(double time, std::string subsystem)
        : std::runtime_error("non-finite " + subsystem + " state at t=" + std::to_string(time)),
          time_(time),
          subsystem_(std::move(subsystem)) {}

    double time() const noexcept { return time_; }
    const std::string& subsystem() const noexcept { return subsystem_; }

private:
    double time_;
    std::string subsystem_;
};

/// Raised for malformed or invalid scenario configuration; key() names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

inline void require_size(const Vector& v, Eigen::Index expected, const char* what) {
    if (v.size() != expected) {
        throw ShapeError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(v.size()));
    }
}

inline void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (m.rows() != rows || m.cols() != cols) {
        throw ShapeError(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
    }
}

}  // namespace ofmbrl

#endif  // OFMBRL_COMMON_HPP
