#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

namespace axivem {

using Index = Eigen::Index;

template <typename Scalar> using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar> using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar> using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar> using Mat4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar> using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar> using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar> using Mat2X = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;
template <typename Scalar> using Mat4X = Eigen::Matrix<Scalar, 4, Eigen::Dynamic>;
template <typename Scalar> using RowVecX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

// Strain/stress component ordering used throughout:
//   0: radial (eps_r / sigma_r)
//   1: axial  (eps_z / sigma_z)
//   2: shear  (gamma_rz, engineering / tau_rz)
//   3: hoop   (eps_theta / sigma_theta)
enum StrainComponent : int { kRadial = 0, kAxial = 1, kShear = 2, kHoop = 3 };

}  // namespace axivem
