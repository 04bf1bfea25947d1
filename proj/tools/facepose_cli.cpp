// facepose command-line front end: batch geometry, labeling, and evaluation.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "facepose/dataset.hpp"
#include "facepose/eval.hpp"
#include "facepose/face_model.hpp"
#include "facepose/losses.hpp"
#include "facepose/parallel.hpp"
#include "facepose/pnp.hpp"
#include "facepose/pose_transform.hpp"
#include "facepose/rotation.hpp"
#include "facepose/text_io.hpp"

namespace {

using namespace facepose;

std::string fmt(double v) { return format_double(v, 9); }

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw DataError("cannot write '" + path + "'");
  return file;
}

Pose6DoF pose_from_values(const std::vector<double>& v) {
  return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
}

BBox box_from_values(const std::vector<double>& v) {
  return {v[0], v[1], v[2], v[3]};
}

/// Point file: one point per line, whitespace-separated coordinates.
Eigen::MatrixXd read_point_file(const std::string& path, int dims) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  size_t line_no = 0, rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::vector<std::string> tokens;
    std::string t;
    while (row >> t) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() != static_cast<size_t>(dims))
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dims) + " coordinates");
    for (const auto& tok : tokens) values.push_back(parse_double(tok, path.c_str()));
    ++rows;
  }
  Eigen::MatrixXd m(dims, rows);
  for (size_t i = 0; i < rows; ++i)
    for (int d = 0; d < dims; ++d) m(d, i) = values[i * dims + d];
  return m;
}

struct MeshOption {
  std::string path;
  mutable std::optional<FaceMesh> loaded;

  const FaceMesh& get() const {
    if (path.empty()) return FaceMesh::canonical();
    if (!loaded) loaded = FaceMesh::load_file(path);
    return *loaded;
  }
};

/// Shared camera flags. Exactly one of the forms must be given:
///   --image W H                   whole-image camera
///   --image W H --box X Y W H     crop positioned in an image
///   --crop W H                    crop viewed on its own
///   --intrinsics F CX CY          explicit values
struct CameraOption {
  std::vector<double> image;
  std::vector<double> box;
  std::vector<double> crop;
  std::vector<double> explicit_k;

  void attach(CLI::App* cmd) {
    cmd->add_option("--image", image, "image width and height")->expected(2);
    cmd->add_option("--box", box, "crop box x y w h inside --image")->expected(4);
    cmd->add_option("--crop", crop, "stand-alone crop width and height")->expected(2);
    cmd->add_option("--intrinsics", explicit_k, "explicit f cx cy")->expected(3);
  }

  Intrinsics resolve() const {
    if (!explicit_k.empty()) return {explicit_k[0], explicit_k[1], explicit_k[2]};
    if (!crop.empty()) return crop_intrinsics(crop[0], crop[1]);
    if (!box.empty()) {
      if (image.empty()) throw DataError("--box requires --image");
      return box_intrinsics(box_from_values(box), image[0], image[1]);
    }
    if (!image.empty()) return image_intrinsics(image[0], image[1]);
    throw DataError("no camera given: use --image, --crop, or --intrinsics");
  }
};

BoxStyle resolve_style(const std::string& name, const std::vector<double>& pads,
                       double forehead) {
  BoxStyle style;
  if (name == "tight") style = BoxStyle::tight();
  else if (name == "loose") style = BoxStyle::loose();
  else if (name == "forehead") style = BoxStyle::forehead();
  else throw DataError("unknown style '" + name + "'");
  if (!pads.empty()) style = {pads[0], pads[1], pads[2], pads[3], style.forehead_extend};
  if (forehead >= 0.0) style.forehead_extend = forehead;
  return style;
}

// ---------------------------------------------------------------- project

int run_project(const MeshOption& mesh_opt, const std::string& points_path,
                const std::vector<double>& pose_v, const CameraOption& camera,
                const std::string& out_path) {
  const PointSet3 points = points_path.empty()
                               ? mesh_opt.get().points()
                               : PointSet3(read_point_file(points_path, 3));
  const PointSet2 q = project(points, pose_from_values(pose_v), camera.resolve());
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  for (Eigen::Index i = 0; i < q.cols(); ++i)
    out << fmt(q(0, i)) << ' ' << fmt(q(1, i)) << '\n';
  return 0;
}

// ------------------------------------------------------------ convert-pose

int run_convert_pose(const std::string& direction, const std::vector<double>& pose_v,
                     const std::vector<double>& box_v, const std::vector<double>& image_v,
                     const std::string& mode, const std::string& out_path) {
  const BBox box = box_from_values(box_v);
  const double w = image_v[0], h = image_v[1];
  const Pose6DoF pose = pose_from_values(pose_v);
  const bool to_global = direction == "local-to-global";
  if (!to_global && direction != "global-to-local")
    throw DataError("unknown direction '" + direction + "'");

  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  if (mode == "ortho") {
    const Pose6DoF converted =
        to_global ? local_to_global(pose, box, w, h) : global_to_local(pose, box, w, h);
    const auto v = converted.as_vector();
    for (int i = 0; i < 6; ++i) out << (i ? " " : "") << fmt(v(i));
    out << '\n';
  } else if (mode == "raw") {
    const LinearPose converted = to_global
                                     ? local_to_global(to_linear(pose), box, w, h)
                                     : global_to_local(to_linear(pose), box, w, h);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        out << (r + c ? " " : "") << fmt(converted.linear(r, c));
    out << '\n';
    for (int i = 0; i < 3; ++i) out << (i ? " " : "") << fmt(converted.translation(i));
    out << '\n';
  } else {
    throw DataError("unknown mode '" + mode + "' (want ortho or raw)");
  }
  return 0;
}

// ----------------------------------------------------------------- bbox

int run_bbox(const MeshOption& mesh_opt, const std::vector<double>& pose_v,
             const CameraOption& camera, const BoxStyle& style, bool clip,
             const std::string& out_path) {
  BBox box = bbox_from_pose(mesh_opt.get(), pose_from_values(pose_v),
                            camera.resolve(), style);
  if (clip) {
    if (camera.image.empty()) throw DataError("--clip requires --image");
    box = clip_bbox(box, camera.image[0], camera.image[1]);
  }
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << fmt(box.x) << ' ' << fmt(box.y) << ' ' << fmt(box.w) << ' ' << fmt(box.h)
      << '\n';
  return 0;
}

// -------------------------------------------------------------- solve-pnp

int run_solve_pnp(const std::string& points3_path, const std::string& points2_path,
                  const CameraOption& camera, const SolverConfig& cfg,
                  const std::string& out_path) {
  const Correspondences c{read_point_file(points3_path, 3),
                          read_point_file(points2_path, 2)};
  const PnpResult result = solve_pnp(c, camera.resolve(), cfg);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  const auto v = result.pose.as_vector();
  for (int i = 0; i < 6; ++i) out << (i ? " " : "") << fmt(v(i));
  out << '\n' << "rmse " << fmt(result.rmse) << '\n';
  return 0;
}

// -------------------------------------------------------------- gen-labels

int run_gen_labels(const MeshOption& mesh_opt, const std::string& boxes_path,
                   const std::string& landmarks_path, const std::string& dims_path,
                   const std::vector<double>& image_size, double min_iou, int jobs,
                   const std::string& out_path) {
  std::vector<ImageRecord> records = parse_boxes_file(boxes_path);
  const auto detections = parse_landmarks_file(landmarks_path);

  if (!dims_path.empty()) {
    const auto dims = parse_dims_file(dims_path);
    for (auto& rec : records) {
      const auto it = dims.find(rec.path);
      if (it == dims.end())
        throw DataError("no dimensions for '" + rec.path + "' in '" + dims_path + "'");
      rec.width = it->second.first;
      rec.height = it->second.second;
    }
  } else if (!image_size.empty()) {
    for (auto& rec : records) {
      rec.width = image_size[0];
      rec.height = image_size[1];
    }
  } else {
    throw DataError("gen-labels needs --dims or --image-size");
  }

  const FaceMesh& mesh = mesh_opt.get();
  static const std::vector<Detection> kNone;
  std::vector<ImageRecord> labeled(records.size());
  parallel_for(records.size(), jobs, [&](size_t i) {
    const auto it = detections.find(records[i].path);
    labeled[i] = weak_label(records[i], it == detections.end() ? kNone : it->second,
                            mesh, min_iou);
  });
  write_dataset_file(labeled, out_path);
  return 0;
}

// ---------------------------------------------------------------- augment

int run_augment(const std::string& in_path, const std::string& out_path, bool mirror,
                double scale, const std::vector<double>& crop_v, bool random,
                std::uint64_t seed, int jobs) {
  const std::vector<ImageRecord> records = read_dataset_file(in_path);

  std::vector<AugmentSpec> specs(records.size());
  if (random) {
    Rng rng(seed);  // specs drawn sequentially in input order
    for (size_t i = 0; i < records.size(); ++i)
      specs[i] = sample_augment_spec(rng, records[i].width, records[i].height);
  } else {
    AugmentSpec spec;
    spec.mirror = mirror;
    spec.scale = scale;
    if (!crop_v.empty()) spec.crop = box_from_values(crop_v);
    for (auto& s : specs) s = spec;
  }

  std::vector<ImageRecord> out(records.size());
  parallel_for(records.size(), jobs,
               [&](size_t i) { out[i] = augment(records[i], specs[i]); });
  write_dataset_file(out, out_path);
  return 0;
}

// ------------------------------------------------------------------- eval

struct Prediction {
  double score;
  Pose6DoF pose;
};

std::map<std::string, std::vector<Prediction>> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::map<std::string, std::vector<Prediction>> preds;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::vector<std::string> tokens;
    std::string t;
    while (row >> t) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() != 8)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 'path score rx ry rz tx ty tz'");
    Prediction p;
    p.score = parse_double(tokens[1], "score");
    double v[6];
    for (int i = 0; i < 6; ++i) v[i] = parse_double(tokens[2 + i], "pose");
    p.pose = {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
    preds[tokens[0]].push_back(p);
  }
  return preds;
}

int run_eval(const MeshOption& mesh_opt, const std::string& pred_path,
             const std::string& gt_path, const std::string& select, double min_score,
             bool yaw_filter, double yaw_lo, double yaw_hi, bool rotation_only,
             int jobs, const std::string& out_path) {
  const std::vector<ImageRecord> records = read_dataset_file(gt_path);
  const auto predictions = read_predictions(pred_path);
  const FaceMesh& mesh = mesh_opt.get();

  struct PerImage {
    std::vector<EvalPair> pairs;
    size_t unmatched = 0;
  };
  std::vector<PerImage> partial(records.size());

  parallel_for(records.size(), jobs, [&](size_t r) {
    const ImageRecord& rec = records[r];
    const auto it = predictions.find(rec.path);

    std::vector<ScoredCandidate> candidates;
    if (it != predictions.end() && rec.width > 0 && rec.height > 0) {
      const Intrinsics k = image_intrinsics(rec.width, rec.height);
      for (const Prediction& p : it->second)
        candidates.push_back({p.pose, bbox_from_pose(mesh, p.pose, k), p.score});
    }

    for (const FaceAnnotation& face : rec.faces) {
      if (!face.pose_global) continue;
      std::optional<size_t> pick;
      if (!candidates.empty()) {
        if (select == "center") {
          pick = select_by_center(candidates, rec.width, rec.height, min_score);
        } else {
          std::vector<std::pair<Pose6DoF, BBox>> simple;
          for (const auto& c : candidates) simple.push_back({c.pose, c.box});
          pick = select_by_iou(simple, face.gt_box);
        }
      }
      if (!pick) {
        ++partial[r].unmatched;
        continue;
      }
      EvalPair pair;
      pair.predicted = candidates[*pick].pose;
      pair.score = candidates[*pick].score;
      pair.gt_rotation = face.pose_global->rotation;
      if (!rotation_only) pair.gt_translation = face.pose_global->translation;
      partial[r].pairs.push_back(pair);
    }
  });

  std::vector<EvalPair> pairs;
  size_t unmatched = 0;
  for (const auto& p : partial) {
    pairs.insert(pairs.end(), p.pairs.begin(), p.pairs.end());
    unmatched += p.unmatched;
  }

  const size_t before = pairs.size();
  if (yaw_filter) pairs = filter_yaw(pairs, yaw_lo, yaw_hi);

  EvalReport report = evaluate(pairs);
  report.filtered = before - pairs.size();
  report.unmatched = unmatched;

  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << format_report(report);
  return 0;
}

// ------------------------------------------------------------------ render

int run_render(const MeshOption& mesh_opt, const std::string& gt_path,
               const std::string& image_key, const std::string& pred_path,
               const BoxStyle& style, const std::string& out_path) {
  const std::vector<ImageRecord> records = read_dataset_file(gt_path);
  if (records.empty()) throw DataError("'" + gt_path + "' has no records");
  const ImageRecord* record = &records.front();
  if (!image_key.empty()) {
    record = nullptr;
    for (const auto& rec : records)
      if (rec.path == image_key) record = &rec;
    if (!record) throw DataError("no record for image '" + image_key + "'");
  }

  std::vector<Pose6DoF> poses;
  if (!pred_path.empty()) {
    const auto preds = read_predictions(pred_path);
    const auto it = preds.find(record->path);
    if (it != preds.end())
      for (const auto& p : it->second) poses.push_back(p.pose);
  }
  render_overlay(*record, poses, mesh_opt.get(), style, out_path);
  return 0;
}

// -------------------------------------------------------------- vote-boxes

int run_vote_boxes(const std::string& in_path, double iou_thresh,
                   const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw DataError("cannot open '" + in_path + "'");
  std::vector<ScoredBox> boxes;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::vector<std::string> tokens;
    std::string t;
    while (row >> t) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() != 5)
      throw DataError(in_path + ":" + std::to_string(line_no) +
                      ": expected 'x y w h score'");
    boxes.push_back({{parse_double(tokens[0], "x"), parse_double(tokens[1], "y"),
                      parse_double(tokens[2], "w"), parse_double(tokens[3], "h")},
                     parse_double(tokens[4], "score")});
  }

  const auto voted = box_vote(boxes, iou_thresh);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  for (const auto& b : voted)
    out << fmt(b.box.x) << ' ' << fmt(b.box.y) << ' ' << fmt(b.box.w) << ' '
        << fmt(b.box.h) << ' ' << fmt(b.score) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"facepose: 6DoF face-pose geometry toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--seed", seed, "seed for every stochastic subcommand")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for per-image subcommands")
      ->capture_default_str();
  app.fallthrough();

  MeshOption mesh;
  std::string points_path, out_path;
  std::vector<double> pose_v;
  CameraOption camera;

  // project
  auto* project_cmd = app.add_subcommand("project", "project 3D points through a pose");
  project_cmd->add_option("--mesh", mesh.path, "mesh asset (default: built-in face)");
  project_cmd->add_option("--points", points_path, "x y z per line instead of a mesh");
  project_cmd->add_option("--pose", pose_v, "rx ry rz tx ty tz")->expected(6)->required();
  camera.attach(project_cmd);
  project_cmd->add_option("--out", out_path, "output file (default stdout)");

  // convert-pose
  std::string direction, mode = "ortho";
  std::vector<double> box_v, image_v;
  auto* convert_cmd =
      app.add_subcommand("convert-pose", "convert a pose between crop and image frames");
  convert_cmd->add_option("--direction", direction, "local-to-global or global-to-local")
      ->required();
  convert_cmd->add_option("--pose", pose_v, "rx ry rz tx ty tz")->expected(6)->required();
  convert_cmd->add_option("--box", box_v, "crop box x y w h")->expected(4)->required();
  convert_cmd->add_option("--image", image_v, "image width and height")
      ->expected(2)
      ->required();
  convert_cmd->add_option("--mode", mode, "ortho (default) or raw matrix output");
  convert_cmd->add_option("--out", out_path, "output file (default stdout)");

  // bbox
  std::string style_name = "tight";
  std::vector<double> pads;
  double forehead = -1.0;
  bool clip = false;
  auto* bbox_cmd = app.add_subcommand("bbox", "bounding box implied by a pose");
  bbox_cmd->add_option("--mesh", mesh.path, "mesh asset (default: built-in face)");
  bbox_cmd->add_option("--pose", pose_v, "rx ry rz tx ty tz")->expected(6)->required();
  camera.attach(bbox_cmd);
  bbox_cmd->add_option("--style", style_name, "tight, loose, or forehead");
  bbox_cmd->add_option("--pad", pads, "pad fractions: left right top bottom")->expected(4);
  bbox_cmd->add_option("--forehead", forehead, "forehead extension fraction");
  bbox_cmd->add_flag("--clip", clip, "clip the box to the image bounds");
  bbox_cmd->add_option("--out", out_path, "output file (default stdout)");

  // solve-pnp
  std::string points3_path, points2_path;
  SolverConfig solver_cfg;
  auto* pnp_cmd = app.add_subcommand("solve-pnp", "pose from 2D-3D correspondences");
  pnp_cmd->add_option("--points3", points3_path, "x y z per line")->required();
  pnp_cmd->add_option("--points2", points2_path, "u v per line")->required();
  camera.attach(pnp_cmd);
  pnp_cmd->add_option("--max-iterations", solver_cfg.max_iterations)
      ->capture_default_str();
  pnp_cmd->add_option("--tol", solver_cfg.step_tol, "parameter-step convergence tolerance")
      ->capture_default_str();
  pnp_cmd->add_option("--damping", solver_cfg.initial_damping)->capture_default_str();
  pnp_cmd->add_option("--out", out_path, "output file (default stdout)");

  // gen-labels
  std::string boxes_path, landmarks_path, dims_path;
  std::vector<double> image_size;
  double min_iou = 0.5;
  auto* gen_cmd =
      app.add_subcommand("gen-labels", "weakly label ground-truth boxes with poses");
  gen_cmd->add_option("--boxes", boxes_path, "box annotation file")->required();
  gen_cmd->add_option("--landmarks", landmarks_path, "detector box+landmark file")
      ->required();
  gen_cmd->add_option("--dims", dims_path, "per-image 'path w h' sidecar");
  gen_cmd->add_option("--image-size", image_size, "width height applied to every image")
      ->expected(2);
  gen_cmd->add_option("--min-iou", min_iou, "detection/ground-truth IoU gate")
      ->capture_default_str();
  gen_cmd->add_option("--mesh", mesh.path, "mesh asset (default: built-in face)");
  gen_cmd->add_option("--out", out_path, "output dataset file")->required();

  // augment
  std::string in_path;
  bool mirror = false, random = false;
  double scale = 1.0;
  std::vector<double> crop_v;
  auto* augment_cmd = app.add_subcommand("augment", "geometric dataset augmentation");
  augment_cmd->add_option("--in", in_path, "input dataset")->required();
  augment_cmd->add_option("--out", out_path, "output dataset")->required();
  augment_cmd->add_flag("--mirror", mirror, "mirror horizontally");
  augment_cmd->add_option("--scale", scale, "uniform scale factor")->capture_default_str();
  augment_cmd->add_option("--crop", crop_v, "crop region x y w h")->expected(4);
  augment_cmd->add_flag("--random", random,
                        "sample mirror/scale/crop per image from --seed");

  // eval
  std::string pred_path, gt_path, select = "iou";
  double min_score = 0.9, yaw_lo = -99.0, yaw_hi = 99.0;
  bool no_yaw_filter = false, rotation_only = false;
  auto* eval_cmd = app.add_subcommand("eval", "pose MAE against a labeled dataset");
  eval_cmd->add_option("--pred", pred_path, "'path score rx ry rz tx ty tz' lines")
      ->required();
  eval_cmd->add_option("--gt", gt_path, "ground-truth dataset file")->required();
  eval_cmd->add_option("--mesh", mesh.path, "mesh asset (default: built-in face)");
  eval_cmd->add_option("--select", select, "face selection rule: iou or center")
      ->capture_default_str();
  eval_cmd->add_option("--min-score", min_score, "score gate for --select center")
      ->capture_default_str();
  std::vector<double> yaw_range;
  eval_cmd->add_option("--yaw-range", yaw_range, "ground-truth angle range kept")
      ->expected(2);
  eval_cmd->add_flag("--no-yaw-filter", no_yaw_filter, "evaluate every matched pair");
  eval_cmd->add_flag("--rotation-only", rotation_only, "ignore translation ground truth");
  eval_cmd->add_option("--out", out_path, "report file (default stdout)");

  // render
  std::string image_key;
  auto* render_cmd = app.add_subcommand("render", "SVG overlay of boxes and poses");
  render_cmd->add_option("--gt", gt_path, "dataset file")->required();
  render_cmd->add_option("--image", image_key, "record path key (default: first)");
  render_cmd->add_option("--pred", pred_path, "prediction file");
  render_cmd->add_option("--mesh", mesh.path, "mesh asset (default: built-in face)");
  render_cmd->add_option("--style", style_name, "tight, loose, or forehead");
  render_cmd->add_option("--out", out_path, "output SVG path")->required();

  // vote-boxes
  double iou_thresh = 0.5;
  auto* vote_cmd = app.add_subcommand("vote-boxes", "score-weighted box voting");
  vote_cmd->add_option("--in", in_path, "'x y w h score' lines")->required();
  vote_cmd->add_option("--iou", iou_thresh, "overlap threshold")->capture_default_str();
  vote_cmd->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (*project_cmd) return run_project(mesh, points_path, pose_v, camera, out_path);
    if (*convert_cmd)
      return run_convert_pose(direction, pose_v, box_v, image_v, mode, out_path);
    if (*bbox_cmd)
      return run_bbox(mesh, pose_v, camera, resolve_style(style_name, pads, forehead),
                      clip, out_path);
    if (*pnp_cmd)
      return run_solve_pnp(points3_path, points2_path, camera, solver_cfg, out_path);
    if (*gen_cmd)
      return run_gen_labels(mesh, boxes_path, landmarks_path, dims_path, image_size,
                            min_iou, jobs, out_path);
    if (*augment_cmd)
      return run_augment(in_path, out_path, mirror, scale, crop_v, random, seed, jobs);
    if (*eval_cmd) {
      if (yaw_range.size() == 2) {
        yaw_lo = yaw_range[0];
        yaw_hi = yaw_range[1];
      }
      return run_eval(mesh, pred_path, gt_path, select, min_score, !no_yaw_filter,
                      yaw_lo, yaw_hi, rotation_only, jobs, out_path);
    }
    if (*render_cmd)
      return run_render(mesh, gt_path, image_key, pred_path,
                        resolve_style(style_name, {}, -1.0), out_path);
    if (*vote_cmd) return run_vote_boxes(in_path, iou_thresh, out_path);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
