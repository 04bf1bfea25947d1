#include "facepose/pose_transform.hpp"

#include "facepose/rotation.hpp"

namespace facepose {

namespace {

void check_dims(const BBox& box, double img_w, double img_h, const char* who) {
  if (!(box.w > 0.0) || !(box.h > 0.0))
    throw DataError(std::string(who) + ": degenerate box");
  if (!(img_w > 0.0) || !(img_h > 0.0))
    throw DataError(std::string(who) + ": image dimensions must be positive");
}

}  // namespace

LinearPose to_linear(const Pose6DoF& pose) {
  return {rot_vec_to_mat(pose.rotation), pose.translation};
}

Pose6DoF from_linear(const LinearPose& pose) {
  return {mat_to_rot_vec(nearest_rotation(pose.linear)), pose.translation};
}

bool same_frame(const FramedPose& a, const FramedPose& b, double tol) {
  if (a.frame != b.frame) return false;
  if (std::abs(a.img_w - b.img_w) > tol || std::abs(a.img_h - b.img_h) > tol)
    return false;
  if (a.frame == Frame::CropLocal) {
    return std::abs(a.box.x - b.box.x) <= tol && std::abs(a.box.y - b.box.y) <= tol &&
           std::abs(a.box.w - b.box.w) <= tol && std::abs(a.box.h - b.box.h) <= tol;
  }
  return true;
}

LinearPose local_to_global(const LinearPose& local, const BBox& box, double img_w,
                           double img_h) {
  check_dims(box, img_w, img_h, "local_to_global");
  if (!(local.translation.z() > 0.0))
    throw NumericError("local_to_global: t_z must be positive");

  // Step 1: zoom out, the camera now sees the whole image.
  Vec3 t = local.translation;
  t.z() *= (img_w + img_h) / (box.w + box.h);

  // Step 2: move the principal point from crop center to image center.
  const Mat3 m = image_intrinsics(img_w, img_h).inverse_matrix() *
                 box_intrinsics(box, img_w, img_h).matrix();
  return {m * local.linear, m * t};
}

Pose6DoF local_to_global(const Pose6DoF& local, const BBox& box, double img_w,
                         double img_h) {
  return from_linear(local_to_global(to_linear(local), box, img_w, img_h));
}

LinearPose global_to_local(const LinearPose& global, const BBox& box, double img_w,
                           double img_h) {
  check_dims(box, img_w, img_h, "global_to_local");
  if (!(global.translation.z() > 0.0))
    throw NumericError("global_to_local: t_z must be positive");

  const Mat3 m = box_intrinsics(box, img_w, img_h).inverse_matrix() *
                 image_intrinsics(img_w, img_h).matrix();
  Vec3 t = m * global.translation;
  t.z() *= (box.w + box.h) / (img_w + img_h);  // zoom back in, last
  return {m * global.linear, t};
}

Pose6DoF global_to_local(const Pose6DoF& global, const BBox& box, double img_w,
                         double img_h) {
  return from_linear(global_to_local(to_linear(global), box, img_w, img_h));
}

LinearPose rebase_to_subimage(const LinearPose& global, const BBox& region,
                              double img_w, double img_h) {
  check_dims(region, img_w, img_h, "rebase_to_subimage");
  const double focal_ratio = (img_w + img_h) / (region.w + region.h);
  Mat3 m = box_intrinsics(region, img_w, img_h).inverse_matrix() *
           image_intrinsics(img_w, img_h).matrix();
  m.row(2) /= focal_ratio;
  return {m * global.linear, m * global.translation};
}

Pose6DoF rebase_to_subimage(const Pose6DoF& global, const BBox& region,
                            double img_w, double img_h) {
  return from_linear(rebase_to_subimage(to_linear(global), region, img_w, img_h));
}

}  // namespace facepose
