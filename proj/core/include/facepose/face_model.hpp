#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>

#include "facepose/camera.hpp"
#include "facepose/types.hpp"

namespace facepose {

/// The seven named anchor points every mesh must tag.
inline constexpr std::array<const char*, 7> kAnchorNames = {
    "nose_tip",         "chin",
    "left_eye_outer",   "right_eye_outer",
    "left_mouth_corner", "right_mouth_corner",
    "forehead_apex"};

/// Five fixed non-coplanar reference points used by the calibration loss.
struct CalibrationPoints {
  PointSet3 points;  // 3x5
};

/// Reference 3D face point set in model units. The frame is x-right,
/// y-down, z away from the camera (the nose has the smallest z). The first
/// 68 points follow the standard 68-landmark ordering; anything beyond is
/// extra structure such as the forehead apex. Bilaterally symmetric about
/// x = 0 and centered on its centroid.
class FaceMesh {
 public:
  /// Parse the ASCII asset format: a count line, then `x y z [anchor]` rows.
  static FaceMesh load(std::istream& in);
  static FaceMesh load_file(const std::string& path);
  /// The face bundled with the library (unit distance between eye centers).
  static const FaceMesh& canonical();

  const PointSet3& points() const { return points_; }
  Eigen::Index size() const { return points_.cols(); }

  Vec3 anchor(const std::string& name) const;
  Eigen::Index anchor_index(const std::string& name) const;

  /// Model points matching five detector landmarks, in the order
  /// left eye, right eye, nose tip, left mouth corner, right mouth corner.
  /// Eye centers are the centroids of the standard eye-contour points.
  PointSet3 five_point_reference() const;

  /// Model points matching a 68-landmark annotation (the first 68 points).
  PointSet3 sixty_eight_point_reference() const;

 private:
  FaceMesh() = default;
  void validate() const;

  PointSet3 points_;
  std::map<std::string, Eigen::Index> anchors_;
};

/// Anchors {nose tip, chin, eye outer corners, forehead apex}; verified
/// non-coplanar (smallest singular value of the centered set > 1e-6).
CalibrationPoints default_calibration_points(const FaceMesh& mesh);

/// Padding is a fraction of the tight box extent per side; negative values
/// tighten (bounded at -0.25). forehead_extend grows the box along the
/// vertical component of the projected head-up direction.
struct BoxStyle {
  double pad_left = 0.0;
  double pad_right = 0.0;
  double pad_top = 0.0;
  double pad_bottom = 0.0;
  double forehead_extend = 0.0;

  static BoxStyle tight() { return {}; }
  static BoxStyle loose() { return {0.1, 0.1, 0.1, 0.1, 0.0}; }
  static BoxStyle forehead() { return {0.05, 0.05, 0.05, 0.05, 0.25}; }
};

/// Bounding box of the mesh projected under `pose`, then styled.
BBox bbox_from_pose(const FaceMesh& mesh, const Pose6DoF& pose, const Intrinsics& k,
                    const BoxStyle& style = BoxStyle::tight());

/// Clip a box to the image rectangle (boxes are real-valued by default).
BBox clip_bbox(const BBox& box, double img_w, double img_h);

}  // namespace facepose
