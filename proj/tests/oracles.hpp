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

// Hand-expanded benchmark formulas used as independent oracles. Nothing here
// calls into the library; values are plain scalar arithmetic on the printed
// plant, basis and update laws.

#ifndef OFMBRL_TESTS_ORACLES_HPP
#define OFMBRL_TESTS_ORACLES_HPP

#include <array>
#include <cmath>

namespace oracle {

inline double f(double x1, double x2) {
    const double g = std::cos(2.0 * x1) + 2.0;
    return -x1 - 0.5 * x2 * (1.0 - g * g);
}

inline double g(double x1, double /*x2*/) { return std::cos(2.0 * x1) + 2.0; }

using W3 = std::array<double, 3>;

// sigma = [x1^2, x1 x2, x2^2]
inline W3 sigma_p(double x1, double x2) { return {2.0 * x1, x2, 0.0}; }
inline W3 sigma_q(double x1, double x2) { return {0.0, x1, 2.0 * x2}; }

inline double dot(const W3& a, const W3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double policy(double x1, double x2, const W3& Wa) { return -0.5 * g(x1, x2) * dot(sigma_q(x1, x2), Wa); }

struct Regressor {
    W3 omega;
    double rho;
};

inline Regressor regressor(double x1, double x2, const W3& Wa, double gamma1) {
    const double accel = f(x1, x2) + g(x1, x2) * policy(x1, x2, Wa);
    const W3 sp = sigma_p(x1, x2);
    const W3 sq = sigma_q(x1, x2);
    Regressor r{};
    for (int i = 0; i < 3; ++i) r.omega[i] = sp[i] * x2 + sq[i] * accel;
    r.rho = 1.0 + gamma1 * dot(r.omega, r.omega);
    return r;
}

inline double bellman(double x1, double x2, const W3& Wc, const W3& Wa) {
    const double u = policy(x1, x2, Wa);
    return dot(Wc, regressor(x1, x2, Wa, 1.0).omega) + x2 * x2 + u * u;
}

inline double hjb_scaled(double x1, double x2, double scale) {
    // V = scale (x1^2 + x2^2)
    const double vp = 2.0 * scale * x1;
    const double vq = 2.0 * scale * x2;
    const double u = -0.5 * g(x1, x2) * vq;
    return vp * x2 + vq * (f(x1, x2) + g(x1, x2) * u) + x2 * x2 + u * u;
}

// Values below were evaluated at 30 significant digits (mpmath) from the same formulas.
inline constexpr double kDriftAt11 = -0.245704578310187752654928504776;
inline constexpr double kGainAt11 = 1.5838531634528576130024317705;
inline constexpr W3 kOmegaAt11 = {2.0, -1.75429542168981224734507149522, -5.50859084337962449469014299045};
inline constexpr double kRhoAt11 = 38.4221255063276788548115599546;
inline constexpr double kBellmanZeroCriticAt11 = 3.50859084337962449469014299045;
// actor rate at Wa = Wc = [1,0,1], single point [1,1], kc=0.2, ka1=100, ka2=0.1, gamma1=1
inline constexpr W3 kActorRateAt11 = {-0.1, -0.0229076833904417796150462396283, -0.145815366780883559230092479257};
// lambda_min of (1/25) sum omega omega' / rho^2 on the 5x5 grid over [-1,1]^2
inline constexpr double kGridLambdaIdeal = 0.0189674096688436910236791180241;
inline constexpr double kGridLambdaInitial = 0.00333943730020755480538261790472;
// HJB residual of V = 2 V* at [1,1]
inline constexpr double kHjbDoubleScaleAt11 = -6.01718168675924898938028598089;

}  // namespace oracle

#endif  // OFMBRL_TESTS_ORACLES_HPP
