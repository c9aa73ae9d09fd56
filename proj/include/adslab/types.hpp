#pragma once

#include <Eigen/Dense>

namespace adslab {

using Scalar = double;
using Index = Eigen::Index;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;
using MatXi = Eigen::MatrixXi;

inline constexpr Scalar kPi = 3.14159265358979323846;

// Default tolerance for membership in the quadric and related algebraic identities.
inline constexpr Scalar kQuadricEps = 1e-12;

}  // namespace adslab
