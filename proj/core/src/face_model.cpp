#include "facepose/face_model.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "facepose/rotation.hpp"

namespace facepose {

namespace {
constexpr double kSymmetryTol = 1e-6;
}

FaceMesh FaceMesh::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("mesh: empty input");
  Eigen::Index n = 0;
  {
    std::istringstream hdr(line);
    if (!(hdr >> n) || n < 1) throw DataError("mesh: bad point count header");
  }

  FaceMesh mesh;
  mesh.points_.resize(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw DataError("mesh: expected " + std::to_string(n) + " points, got " +
                      std::to_string(i));
    std::istringstream row(line);
    double x, y, z;
    if (!(row >> x >> y >> z))
      throw DataError("mesh: malformed point on line " + std::to_string(i + 2));
    mesh.points_.col(i) << x, y, z;
    std::string tag;
    if (row >> tag) {
      if (std::find(kAnchorNames.begin(), kAnchorNames.end(), tag) ==
          kAnchorNames.end())
        throw DataError("mesh: unknown anchor '" + tag + "'");
      if (!mesh.anchors_.emplace(tag, i).second)
        throw DataError("mesh: duplicate anchor '" + tag + "'");
    }
  }
  mesh.validate();
  return mesh;
}

FaceMesh FaceMesh::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("mesh: cannot open '" + path + "'");
  return load(in);
}

void FaceMesh::validate() const {
  if (points_.cols() < 68)
    throw DataError("mesh: need at least 68 points, got " +
                    std::to_string(points_.cols()));
  if (!points_.allFinite()) throw DataError("mesh: non-finite coordinates");
  for (const char* name : kAnchorNames)
    if (!anchors_.count(name))
      throw DataError(std::string("mesh: missing anchor '") + name + "'");

  const Vec3 centroid = points_.rowwise().mean();
  if (centroid.cwiseAbs().maxCoeff() > kSymmetryTol)
    throw DataError("mesh: centroid is not at the origin");

  // Every point needs a mirror partner across x = 0.
  for (Eigen::Index i = 0; i < points_.cols(); ++i) {
    const Vec3 mirrored(-points_(0, i), points_(1, i), points_(2, i));
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < points_.cols(); ++j)
      best = std::min(best, (points_.col(j) - mirrored).norm());
    if (best > kSymmetryTol)
      throw DataError("mesh: point " + std::to_string(i) +
                      " has no mirror partner (asymmetry " + std::to_string(best) + ")");
  }
}

Eigen::Index FaceMesh::anchor_index(const std::string& name) const {
  auto it = anchors_.find(name);
  if (it == anchors_.end()) throw DataError("mesh: no anchor '" + name + "'");
  return it->second;
}

Vec3 FaceMesh::anchor(const std::string& name) const {
  return points_.col(anchor_index(name));
}

PointSet3 FaceMesh::five_point_reference() const {
  PointSet3 ref(3, 5);
  // Standard eye contours: 36-41 (image-left), 42-47 (image-right).
  ref.col(0) = points_.middleCols(36, 6).rowwise().mean();
  ref.col(1) = points_.middleCols(42, 6).rowwise().mean();
  ref.col(2) = anchor("nose_tip");
  ref.col(3) = anchor("left_mouth_corner");
  ref.col(4) = anchor("right_mouth_corner");
  return ref;
}

PointSet3 FaceMesh::sixty_eight_point_reference() const {
  return points_.leftCols(68);
}

CalibrationPoints default_calibration_points(const FaceMesh& mesh) {
  PointSet3 pts(3, 5);
  pts.col(0) = mesh.anchor("nose_tip");
  pts.col(1) = mesh.anchor("chin");
  pts.col(2) = mesh.anchor("left_eye_outer");
  pts.col(3) = mesh.anchor("right_eye_outer");
  pts.col(4) = mesh.anchor("forehead_apex");

  const PointSet3 centered = pts.colwise() - Vec3(pts.rowwise().mean());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered.transpose());
  if (svd.singularValues().minCoeff() <= 1e-6)
    throw NumericError("calibration points are co-planar; mesh looks corrupt");
  return {pts};
}

BBox bbox_from_pose(const FaceMesh& mesh, const Pose6DoF& pose, const Intrinsics& k,
                    const BoxStyle& style) {
  constexpr double kMinPad = -0.25;
  for (double p : {style.pad_left, style.pad_right, style.pad_top, style.pad_bottom})
    if (p < kMinPad) throw DataError("bbox_from_pose: padding below -0.25");

  const PointSet2 q = project(mesh.points(), pose, k);
  double x0 = q.row(0).minCoeff(), x1 = q.row(0).maxCoeff();
  double y0 = q.row(1).minCoeff(), y1 = q.row(1).maxCoeff();
  const double w = x1 - x0, h = y1 - y0;

  x0 -= style.pad_left * w;
  x1 += style.pad_right * w;
  y0 -= style.pad_top * h;
  y1 += style.pad_bottom * h;

  if (style.forehead_extend != 0.0) {
    // Head-up is -y in model coordinates; its image-vertical component
    // decides which horizontal edge belongs to the forehead.
    const Vec3 up = rot_vec_to_mat(pose.rotation) * Vec3(0.0, -1.0, 0.0);
    const double shift = style.forehead_extend * h * up.y();
    if (shift < 0.0)
      y0 += shift;  // up points up in the image, grow the top edge
    else
      y1 += shift;
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

BBox clip_bbox(const BBox& box, double img_w, double img_h) {
  const double x0 = std::clamp(box.x, 0.0, img_w);
  const double y0 = std::clamp(box.y, 0.0, img_h);
  const double x1 = std::clamp(box.x + box.w, 0.0, img_w);
  const double y1 = std::clamp(box.y + box.h, 0.0, img_h);
  return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace facepose
