#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace facepose {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Column-per-point matrices, P in R^{3xn} and Q in R^{2xn}.
using PointSet3 = Eigen::Matrix3Xd;
using PointSet2 = Eigen::Matrix2Xd;

/// Axis-angle rotation: direction is the axis, magnitude the angle in radians.
using RotationVector = Eigen::Vector3d;

/// Raw 3x3 linear map, invertible but not necessarily orthonormal.
using GeneralLinear3 = Eigen::Matrix3d;

/// Malformed or inconsistent input (files, counts, argument shapes).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Degenerate geometry or failed numerics (behind-camera points,
/// singular matrices, solver divergence).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tait-Bryan angles in degrees, camera frame x-right / y-down / z-forward,
/// composed as R = Rz(roll) * Ry(yaw) * Rx(pitch).
struct EulerAngles {
  double pitch = 0.0;
  double yaw = 0.0;
  double roll = 0.0;
  /// Set when |yaw| is within 1e-6 deg of +/-90; roll is forced to 0 there.
  bool gimbal_lock = false;
};

/// Six degree-of-freedom rigid pose: rotation vector plus translation in
/// model units. t_z must be positive for anything that gets projected.
struct Pose6DoF {
  RotationVector rotation = RotationVector::Zero();
  Vec3 translation = Vec3::Zero();

  Eigen::Matrix<double, 6, 1> as_vector() const {
    Eigen::Matrix<double, 6, 1> v;
    v << rotation, translation;
    return v;
  }
};

/// Axis-aligned box, top-left corner plus extent, in pixels.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
};

}  // namespace facepose
