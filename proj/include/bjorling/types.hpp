#pragma once

#include <Eigen/Dense>
#include <complex>

namespace bjorling {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

namespace defaults {
inline constexpr double quad_tol = 1e-10;
inline constexpr double check_tol = 1e-8;
inline constexpr double registration_tol = 1e-6;
inline constexpr double epsilon_branch = 1e-12;
}  // namespace defaults

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace bjorling
