// SPDX-License-Identifier: Apache-2.0

#ifndef CCMAVF_LINALG_HPP
#define CCMAVF_LINALG_HPP

#include <complex>

#include <Eigen/Dense>

namespace ccmavf {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace ccmavf

#endif  // CCMAVF_LINALG_HPP
