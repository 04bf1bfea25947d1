#include "facepose/camera.hpp"

#include "facepose/rotation.hpp"

namespace facepose {

Intrinsics crop_intrinsics(double box_w, double box_h) {
  if (!(box_w > 0.0) || !(box_h > 0.0))
    throw DataError("crop_intrinsics: box dimensions must be positive");
  return {box_w + box_h, 0.5 * box_w, 0.5 * box_h};
}

Intrinsics box_intrinsics(const BBox& box, double img_w, double img_h) {
  if (!(box.w > 0.0) || !(box.h > 0.0))
    throw DataError("box_intrinsics: box dimensions must be positive");
  if (!(img_w > 0.0) || !(img_h > 0.0))
    throw DataError("box_intrinsics: image dimensions must be positive");
  return {img_w + img_h, 0.5 * box.w + box.x, 0.5 * box.h + box.y};
}

Intrinsics image_intrinsics(double img_w, double img_h) {
  if (!(img_w > 0.0) || !(img_h > 0.0))
    throw DataError("image_intrinsics: image dimensions must be positive");
  return {img_w + img_h, 0.5 * img_w, 0.5 * img_h};
}

PointSet2 project_linear(const PointSet3& points, const Mat3& linear,
                         const Vec3& translation, const Intrinsics& k) {
  if (points.cols() == 0) throw DataError("project: empty point set");
  if (!points.allFinite() || !linear.allFinite() || !translation.allFinite())
    throw DataError("project: non-finite input");
  const PointSet3 cam = (linear * points).colwise() + translation;
  if (cam.row(2).minCoeff() <= 1e-9)
    throw NumericError("project: point with non-positive camera depth");
  PointSet2 q(2, points.cols());
  q.row(0) = k.f * cam.row(0).cwiseQuotient(cam.row(2)).array() + k.cx;
  q.row(1) = k.f * cam.row(1).cwiseQuotient(cam.row(2)).array() + k.cy;
  return q;
}

PointSet2 project(const PointSet3& points, const Pose6DoF& pose, const Intrinsics& k) {
  return project_linear(points, rot_vec_to_mat(pose.rotation), pose.translation, k);
}

}  // namespace facepose
