// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pilotreuse {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Invalid configuration; the message names the offending field.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a mathematical operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A numerical routine failed (solver breakdown, round-off beyond tolerance).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Wraps an angle to [0, 2*pi).
inline double wrap_to_2pi(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

/// Wraps an angle to (-pi, pi].
inline double wrap_to_pi(double angle) {
    double w = std::fmod(angle + kPi, kTwoPi);
    if (w <= 0.0) w += kTwoPi;
    return w - kPi;
}

/// Hermitian part (A + A^H) / 2.
inline CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace pilotreuse
