#include "facepose/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace facepose {

double iou(const BBox& a, const BBox& b) {
  if (!(a.w > 0.0) || !(a.h > 0.0) || !(b.w > 0.0) || !(b.h > 0.0))
    throw DataError("iou: boxes must have positive extent");
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

std::vector<ProposalLabel> assign_labels(const std::vector<BBox>& proposals,
                                         const std::vector<BBox>& gt_boxes,
                                         double pos_thresh, double neg_thresh) {
  if (!(pos_thresh >= 0.0 && pos_thresh <= 1.0) ||
      !(neg_thresh >= 0.0 && neg_thresh <= 1.0) || pos_thresh < neg_thresh)
    throw DataError("assign_labels: need 0 <= neg_thresh <= pos_thresh <= 1");

  std::vector<ProposalLabel> labels(proposals.size());
  if (gt_boxes.empty()) return labels;  // all negatives

  for (size_t i = 0; i < proposals.size(); ++i) {
    double best = -1.0;
    size_t best_j = 0;
    for (size_t j = 0; j < gt_boxes.size(); ++j) {
      const double v = iou(proposals[i], gt_boxes[j]);
      if (v > best) {  // strict: ties keep the lowest index
        best = v;
        best_j = j;
      }
    }
    if (best >= pos_thresh) {
      labels[i].p_star = 1;
      labels[i].matched_gt = best_j;
    } else if (best >= neg_thresh) {
      labels[i].ignored = true;
    }
  }
  return labels;
}

double bce_loss(double p, int p_star) {
  if (p_star != 0 && p_star != 1) throw DataError("bce_loss: p_star must be 0 or 1");
  constexpr double eps = 1e-7;
  p = std::clamp(p, eps, 1.0 - eps);
  return -(p_star * std::log(p) + (1 - p_star) * std::log1p(-p));
}

double pose_loss(const Pose6DoF& pred, const Pose6DoF& gt) {
  return (pred.as_vector() - gt.as_vector()).squaredNorm();
}

double pose_loss(const FramedPose& pred, const FramedPose& gt) {
  if (!same_frame(pred, gt))
    throw DataError("pose_loss: poses are expressed in different frames");
  return pose_loss(pred.pose, gt.pose);
}

double calib_loss(const Pose6DoF& pred, const Pose6DoF& gt,
                  const CalibrationPoints& pc, const Intrinsics& k) {
  return (project(pc.points, pred, k) - project(pc.points, gt, k))
      .cwiseAbs()
      .sum();
}

double multi_task_loss(double p, int p_star, const Pose6DoF& h_pred,
                       const Pose6DoF& h_gt, const CalibrationPoints& pc,
                       const Intrinsics& k) {
  double loss = bce_loss(p, p_star);
  if (p_star == 1) loss += pose_loss(h_pred, h_gt) + calib_loss(h_pred, h_gt, pc, k);
  return loss;
}

std::vector<ScoredBox> box_vote(const std::vector<ScoredBox>& boxes,
                                double iou_thresh) {
  for (const auto& b : boxes)
    if (!(b.score >= 0.0 && b.score <= 1.0))
      throw DataError("box_vote: scores must lie in [0, 1]");

  std::vector<size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return boxes[a].score > boxes[b].score;  // stable: ties keep input order
  });

  std::vector<bool> suppressed(boxes.size(), false);
  std::vector<ScoredBox> out;
  for (size_t idx : order) {
    if (suppressed[idx]) continue;
    // Vote over *all* inputs overlapping the selected box, suppressed or not.
    double wx = 0.0, wy = 0.0, ww = 0.0, wh = 0.0, total = 0.0;
    for (size_t j = 0; j < boxes.size(); ++j) {
      if (iou(boxes[idx].box, boxes[j].box) < iou_thresh) continue;
      if (!suppressed[j]) suppressed[j] = true;
      const double w = boxes[j].score;
      wx += w * boxes[j].box.x;
      wy += w * boxes[j].box.y;
      ww += w * boxes[j].box.w;
      wh += w * boxes[j].box.h;
      total += w;
    }
    ScoredBox voted = boxes[idx];
    if (total > 0.0)
      voted.box = {wx / total, wy / total, ww / total, wh / total};
    out.push_back(voted);
  }
  return out;
}

}  // namespace facepose
