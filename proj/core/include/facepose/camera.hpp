#pragma once

#include "facepose/types.hpp"

namespace facepose {

/// Pinhole intrinsics with a single focal length:
///   [[f, 0, cx], [0, f, cy], [0, 0, 1]].
struct Intrinsics {
  double f = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  Mat3 matrix() const {
    Mat3 k;
    k << f, 0.0, cx, 0.0, f, cy, 0.0, 0.0, 1.0;
    return k;
  }
  /// Closed-form inverse; exact structure, no LU round-off.
  Mat3 inverse_matrix() const {
    Mat3 k;
    k << 1.0 / f, 0.0, -cx / f, 0.0, 1.0 / f, -cy / f, 0.0, 0.0, 1.0;
    return k;
  }
  Vec2 normalize(const Vec2& px) const { return {(px.x() - cx) / f, (px.y() - cy) / f}; }
};

/// Camera for a crop viewed on its own: f = w_bb + h_bb, principal point at
/// the crop center in crop-local coordinates.
Intrinsics crop_intrinsics(double box_w, double box_h);

/// Camera for a crop positioned inside an image: f = img_w + img_h,
/// principal point at the crop center in image coordinates.
Intrinsics box_intrinsics(const BBox& box, double img_w, double img_h);

/// Camera for the whole image: f = w + h, principal point at the center.
Intrinsics image_intrinsics(double img_w, double img_h);

/// Pinhole projection q = dehomogenize(K [R|t] [P;1]).
/// Throws NumericError if any transformed point has depth <= 1e-9.
PointSet2 project(const PointSet3& points, const Pose6DoF& pose, const Intrinsics& k);

/// Same projection for an explicit (not necessarily orthonormal) linear part.
PointSet2 project_linear(const PointSet3& points, const Mat3& linear,
                         const Vec3& translation, const Intrinsics& k);

}  // namespace facepose
