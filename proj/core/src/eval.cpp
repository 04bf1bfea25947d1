#include "facepose/eval.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "facepose/losses.hpp"
#include "facepose/rotation.hpp"
#include "facepose/text_io.hpp"

namespace facepose {

namespace {

EulerAngles gt_euler_of(const EvalPair& pair) {
  if (pair.gt_euler) return *pair.gt_euler;
  if (pair.gt_rotation) return euler_from_rot_vec(*pair.gt_rotation);
  throw DataError("evaluate: pair without rotation ground truth");
}

}  // namespace

double angular_error(double a_deg, double b_deg) {
  double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
  return std::min(d, 360.0 - d);
}

std::vector<EvalPair> filter_yaw(const std::vector<EvalPair>& pairs, double lo,
                                 double hi) {
  std::vector<EvalPair> kept;
  for (const auto& pair : pairs) {
    const EulerAngles e = gt_euler_of(pair);
    if (e.pitch >= lo && e.pitch <= hi && e.yaw >= lo && e.yaw <= hi &&
        e.roll >= lo && e.roll <= hi)
      kept.push_back(pair);
  }
  return kept;
}

size_t select_by_iou(const std::vector<std::pair<Pose6DoF, BBox>>& candidates,
                     const BBox& gt_box) {
  if (candidates.empty()) throw DataError("select_by_iou: no candidates");
  double best = -1.0;
  size_t best_i = 0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const double v = iou(candidates[i].second, gt_box);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  return best_i;
}

std::optional<size_t> select_by_center(const std::vector<ScoredCandidate>& candidates,
                                       double img_w, double img_h, double min_score) {
  const double cx = 0.5 * img_w, cy = 0.5 * img_h;
  std::optional<size_t> best;
  double best_d = 0.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (!(candidates[i].score > min_score)) continue;
    const double dx = candidates[i].box.cx() - cx, dy = candidates[i].box.cy() - cy;
    const double d = dx * dx + dy * dy;
    if (!best || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

EvalReport evaluate(const std::vector<EvalPair>& pairs) {
  if (pairs.empty()) throw DataError("evaluate: no pairs");

  EvalReport report;
  report.evaluated = pairs.size();
  Vec3 t_sum = Vec3::Zero();
  size_t t_count = 0;
  for (const auto& pair : pairs) {
    const EulerAngles gt = gt_euler_of(pair);
    const EulerAngles pred = euler_from_rot_vec(pair.predicted.rotation);
    report.mae_pitch += angular_error(pred.pitch, gt.pitch);
    report.mae_yaw += angular_error(pred.yaw, gt.yaw);
    report.mae_roll += angular_error(pred.roll, gt.roll);
    if (pair.gt_translation) {
      t_sum += (pair.predicted.translation - *pair.gt_translation).cwiseAbs();
      ++t_count;
    }
  }
  const double n = static_cast<double>(pairs.size());
  report.mae_pitch /= n;
  report.mae_yaw /= n;
  report.mae_roll /= n;
  report.mae_r = (report.mae_pitch + report.mae_yaw + report.mae_roll) / 3.0;
  if (t_count > 0) {
    report.mae_txyz = t_sum / static_cast<double>(t_count);
    report.mae_t = report.mae_txyz->mean();
  }
  return report;
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  out << "evaluated " << report.evaluated << '\n'
      << "filtered " << report.filtered << '\n'
      << "unmatched " << report.unmatched << '\n'
      << "mae_yaw " << format_double(report.mae_yaw, 9) << '\n'
      << "mae_pitch " << format_double(report.mae_pitch, 9) << '\n'
      << "mae_roll " << format_double(report.mae_roll, 9) << '\n'
      << "mae_r " << format_double(report.mae_r, 9) << '\n';
  if (report.mae_txyz) {
    out << "mae_tx " << format_double(report.mae_txyz->x(), 9) << '\n'
        << "mae_ty " << format_double(report.mae_txyz->y(), 9) << '\n'
        << "mae_tz " << format_double(report.mae_txyz->z(), 9) << '\n'
        << "mae_t " << format_double(*report.mae_t, 9) << '\n';
  }
  return out.str();
}

void render_overlay(const ImageRecord& record, const std::vector<Pose6DoF>& poses,
                    const FaceMesh& mesh, const BoxStyle& style,
                    const std::string& out_path) {
  if (!(record.width > 0.0) || !(record.height > 0.0))
    throw DataError("render_overlay: record has no image dimensions");

  auto fmt = [](double v) { return format_double(v, 9); };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(record.width)
      << "\" height=\"" << fmt(record.height) << "\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << fmt(record.width) << "\" height=\""
      << fmt(record.height) << "\" fill=\"#202020\"/>\n";

  for (const auto& face : record.faces) {
    svg << "  <rect x=\"" << fmt(face.gt_box.x) << "\" y=\"" << fmt(face.gt_box.y)
        << "\" width=\"" << fmt(face.gt_box.w) << "\" height=\"" << fmt(face.gt_box.h)
        << "\" fill=\"none\" stroke=\"#00ff00\" stroke-width=\"2\"/>\n";
  }

  const Intrinsics k = image_intrinsics(record.width, record.height);
  const CalibrationPoints calib = default_calibration_points(mesh);
  for (const auto& pose : poses) {
    const BBox box = bbox_from_pose(mesh, pose, k, style);
    svg << "  <rect x=\"" << fmt(box.x) << "\" y=\"" << fmt(box.y) << "\" width=\""
        << fmt(box.w) << "\" height=\"" << fmt(box.h)
        << "\" fill=\"none\" stroke=\"#4090ff\" stroke-width=\"2\"/>\n";
    const PointSet2 q = project(calib.points, pose, k);
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
      svg << "  <circle cx=\"" << fmt(q(0, i)) << "\" cy=\"" << fmt(q(1, i))
          << "\" r=\"3\" fill=\"#ff5050\"/>\n";
    }
  }
  svg << "</svg>\n";

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw DataError("render_overlay: cannot write '" + out_path + "'");
  out << svg.str();
  if (!out) throw DataError("render_overlay: write failed for '" + out_path + "'");
}

}  // namespace facepose
