#pragma once

#include <optional>
#include <vector>

#include "facepose/camera.hpp"
#include "facepose/face_model.hpp"
#include "facepose/pose_transform.hpp"
#include "facepose/types.hpp"

namespace facepose {

/// Intersection over union of two boxes, in [0, 1].
double iou(const BBox& a, const BBox& b);

struct ProposalLabel {
  int p_star = 0;                     // 1 = face, 0 = background
  std::optional<size_t> matched_gt;   // set iff p_star == 1
  bool ignored = false;               // max IoU fell between the thresholds
};

/// Match every proposal to its max-IoU ground truth (ties to the lowest
/// index). Positive iff IoU >= pos_thresh; with neg_thresh < pos_thresh,
/// proposals landing in [neg_thresh, pos_thresh) are flagged `ignored`.
std::vector<ProposalLabel> assign_labels(const std::vector<BBox>& proposals,
                                         const std::vector<BBox>& gt_boxes,
                                         double pos_thresh = 0.5,
                                         double neg_thresh = 0.5);

/// Binary cross-entropy; p is clamped to [1e-7, 1 - 1e-7].
double bce_loss(double p, int p_star);

/// Squared L2 distance between two 6-vector poses (same frame).
double pose_loss(const Pose6DoF& pred, const Pose6DoF& gt);
double pose_loss(const FramedPose& pred, const FramedPose& gt);

/// Entrywise L1 distance between the calibration points projected with the
/// predicted and the ground-truth pose.
double calib_loss(const Pose6DoF& pred, const Pose6DoF& gt,
                  const CalibrationPoints& pc, const Intrinsics& k);

/// L_cls + p* L_pose + p* L_calib. For p* == 0 the pose terms are never
/// evaluated and the result is exactly bce_loss(p, 0).
double multi_task_loss(double p, int p_star, const Pose6DoF& h_pred,
                       const Pose6DoF& h_gt, const CalibrationPoints& pc,
                       const Intrinsics& k);

struct ScoredBox {
  BBox box;
  double score = 0.0;
};

/// Greedy descending-score selection; every selected box is replaced by the
/// score-weighted average of all input boxes overlapping it with
/// IoU >= iou_thresh, and those overlapping boxes are suppressed. Scores are
/// untouched. Deterministic: ties break to the earlier input index.
std::vector<ScoredBox> box_vote(const std::vector<ScoredBox>& boxes,
                                double iou_thresh = 0.5);

}  // namespace facepose
