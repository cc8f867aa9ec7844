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

#ifndef OFMBRL_INTEGRATORS_HPP
#define OFMBRL_INTEGRATORS_HPP

#include "ofmbrl/common.hpp"

namespace ofmbrl {

/// One classical fourth-order Runge-Kutta step of y' = f(t, y).
template <class Field>
Vector rk4_step(const Field& f, double t, const Vector& y, double h) {
    const Vector k1 = f(t, y);
    const Vector k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
    const Vector k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
    const Vector k4 = f(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class Field>
Vector euler_step(const Field& f, double t, const Vector& y, double h) {
    return y + h * f(t, y);
}

/// Explicit Euler from t0 to t1 in `steps` equal steps.
template <class Field>
Vector euler_integrate(const Field& f, double t0, const Vector& y0, double t1, long steps) {
    Vector y = y0;
    if (steps <= 0) return y;
    const double h = (t1 - t0) / static_cast<double>(steps);
    for (long i = 0; i < steps; ++i) y = euler_step(f, t0 + static_cast<double>(i) * h, y, h);
    return y;
}

}  // namespace ofmbrl

#endif  // OFMBRL_INTEGRATORS_HPP
