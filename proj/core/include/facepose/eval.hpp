#pragma once

#include <optional>
#include <string>
#include <vector>

#include "facepose/dataset.hpp"
#include "facepose/face_model.hpp"
#include "facepose/types.hpp"

namespace facepose {

/// One matched prediction/ground-truth pair. Rotation ground truth is
/// either Euler angles or a rotation vector; translation is optional
/// (some benchmarks do not provide it).
struct EvalPair {
  Pose6DoF predicted;
  double score = 1.0;
  std::optional<EulerAngles> gt_euler;
  std::optional<RotationVector> gt_rotation;
  std::optional<Vec3> gt_translation;
};

struct EvalReport {
  double mae_pitch = 0.0;
  double mae_yaw = 0.0;
  double mae_roll = 0.0;
  double mae_r = 0.0;  // mean of the three rotation MAEs
  std::optional<Vec3> mae_txyz;
  std::optional<double> mae_t;  // mean of the three translation MAEs
  size_t evaluated = 0;
  size_t filtered = 0;
  size_t unmatched = 0;
};

/// Wrap-correct absolute difference of two angles in degrees, in [0, 180].
double angular_error(double a_deg, double b_deg);

/// Keep pairs whose ground-truth pitch, yaw, and roll all lie in [lo, hi].
std::vector<EvalPair> filter_yaw(const std::vector<EvalPair>& pairs,
                                 double lo = -99.0, double hi = 99.0);

/// Index of the candidate whose box has the highest IoU with the ground
/// truth; ties break to the lowest index. Throws DataError when empty.
size_t select_by_iou(const std::vector<std::pair<Pose6DoF, BBox>>& candidates,
                     const BBox& gt_box);

struct ScoredCandidate {
  Pose6DoF pose;
  BBox box;
  double score = 0.0;
};

/// Among candidates with score > min_score, the one whose box center is
/// closest to the image center; nullopt when none qualifies.
std::optional<size_t> select_by_center(const std::vector<ScoredCandidate>& candidates,
                                       double img_w, double img_h,
                                       double min_score = 0.9);

/// Per-axis mean absolute errors and their aggregates. Rotation errors are
/// computed on Euler angles with wraparound; translation errors only over
/// pairs carrying translation ground truth. Throws DataError on empty input.
EvalReport evaluate(const std::vector<EvalPair>& pairs);

std::string format_report(const EvalReport& report);

/// Deterministic SVG overlay: ground-truth boxes, pose-projected boxes, and
/// projected calibration points for each pose. Identical inputs produce
/// byte-identical files.
void render_overlay(const ImageRecord& record, const std::vector<Pose6DoF>& poses,
                    const FaceMesh& mesh, const BoxStyle& style,
                    const std::string& out_path);

}  // namespace facepose
