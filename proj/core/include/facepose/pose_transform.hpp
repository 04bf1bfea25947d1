#pragma once

#include "facepose/camera.hpp"
#include "facepose/types.hpp"

namespace facepose {

/// Pose with a general-linear "rotation" slot. Frame conversions produce a
/// shear-times-rotation linear part; carrying it uncollapsed keeps chained
/// conversions exact. Collapse to Pose6DoF with from_linear().
struct LinearPose {
  GeneralLinear3 linear = GeneralLinear3::Identity();
  Vec3 translation = Vec3::Zero();
};

LinearPose to_linear(const Pose6DoF& pose);

/// Snap the linear part to the nearest rotation and extract the axis-angle
/// vector. Exact when the linear part already is a rotation.
Pose6DoF from_linear(const LinearPose& pose);

enum class Frame { CropLocal, ImageGlobal };

/// A pose together with the camera frame it is expressed in.
struct FramedPose {
  Pose6DoF pose;
  Frame frame = Frame::ImageGlobal;
  BBox box;  // the crop, when frame == CropLocal
  double img_w = 0.0;
  double img_h = 0.0;
};

bool same_frame(const FramedPose& a, const FramedPose& b, double tol = 1e-9);

/// Crop-frame pose -> whole-image pose. Rescales t_z by
/// (w+h)/(w_bb+h_bb) first, then moves the principal point:
/// t' = K_img^-1 K_box t, linear' = K_img^-1 K_box R.
/// The default overload orthogonalizes the linear part before extracting
/// the rotation vector; the LinearPose overload keeps the raw product,
/// which is what exact round trips and projection-equality checks need.
Pose6DoF local_to_global(const Pose6DoF& local, const BBox& box, double img_w,
                         double img_h);
LinearPose local_to_global(const LinearPose& local, const BBox& box, double img_w,
                           double img_h);

/// Whole-image pose -> crop-frame pose. Same two steps in the opposite
/// order: principal point first, t_z rescale last.
Pose6DoF global_to_local(const Pose6DoF& global, const BBox& box, double img_w,
                         double img_h);
LinearPose global_to_local(const LinearPose& global, const BBox& box, double img_w,
                           double img_h);

/// Re-express a whole-image pose relative to a sub-rectangle treated as a
/// complete image of size region.w x region.h. The focal-length ratio is
/// folded into the z-row of the linear map, so projecting the result through
/// image_intrinsics(region.w, region.h) reproduces the original pixels
/// shifted by (-region.x, -region.y) exactly.
Pose6DoF rebase_to_subimage(const Pose6DoF& global, const BBox& region,
                            double img_w, double img_h);
LinearPose rebase_to_subimage(const LinearPose& global, const BBox& region,
                              double img_w, double img_h);

}  // namespace facepose
