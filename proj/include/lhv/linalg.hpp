#pragma once

#include <Eigen/Dense>
#include <complex>

namespace lhv {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using MatXc = Eigen::MatrixXcd;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

using complexd = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kFourPi = 4.0 * kPi;

} // namespace lhv
