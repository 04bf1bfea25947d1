#pragma once

#include "facepose/types.hpp"

namespace facepose {

/// Rodrigues: axis-angle vector to rotation matrix. The zero vector maps to
/// the identity; small angles use series-expanded coefficients.
Mat3 rot_vec_to_mat(const RotationVector& rv);

/// Inverse Rodrigues. Output is canonical: magnitude in [0, pi], and at
/// exactly pi the axis sign makes its first nonzero component positive.
/// Throws NumericError if the input deviates from orthonormality by more
/// than 1e-6 (orthogonalize with nearest_rotation first).
RotationVector mat_to_rot_vec(const Mat3& m);

/// Wrap an arbitrary rotation vector to the canonical range above.
RotationVector canonicalize(const RotationVector& rv);

/// Orthogonal Procrustes projection: the rotation closest to `g` in
/// Frobenius norm, via SVD with determinant sign correction.
/// Throws NumericError on (near-)singular input.
Mat3 nearest_rotation(const GeneralLinear3& g);

/// True within `tol` of R^T R = I and det R = +1.
bool is_rotation(const Mat3& m, double tol = 1e-9);

Mat3 mat_from_euler(const EulerAngles& e);
EulerAngles euler_from_mat(const Mat3& m);

inline EulerAngles euler_from_rot_vec(const RotationVector& rv) {
  return euler_from_mat(rot_vec_to_mat(rv));
}

/// Geodesic distance between two rotations, radians in [0, pi].
double rotation_angle_between(const Mat3& a, const Mat3& b);

}  // namespace facepose
