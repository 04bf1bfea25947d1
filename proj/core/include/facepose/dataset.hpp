#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "facepose/face_model.hpp"
#include "facepose/pnp.hpp"
#include "facepose/types.hpp"

namespace facepose {

enum class LabelSource { None, Human, Weak };

/// One annotated face: a ground-truth box plus whatever labels exist for it.
struct FaceAnnotation {
  BBox gt_box;
  std::optional<PointSet2> landmarks5;
  std::optional<PointSet2> landmarks68;
  std::optional<Pose6DoF> pose_global;
  LabelSource label_source = LabelSource::None;
};

/// All annotations for one image. Width/height may be zero (unknown) for
/// records parsed from box files, which carry no dimensions; any operation
/// that needs a camera requires them to be set.
struct ImageRecord {
  std::string path;
  double width = 0.0;
  double height = 0.0;
  std::vector<FaceAnnotation> faces;
};

/// A detector output used for weak labeling: box plus five landmarks
/// (left eye, right eye, nose tip, left mouth corner, right mouth corner),
/// all in image coordinates.
struct Detection {
  BBox box;
  PointSet2 landmarks5;
};

/// Box annotation file: repeated blocks of
///   relative/image/path.jpg
///   N
///   x y w h            (N integer lines)
std::vector<ImageRecord> parse_boxes(std::istream& in);
std::vector<ImageRecord> parse_boxes_file(const std::string& path);

/// Landmark annotation file: same block structure, with each face line
/// carrying `x y w h u1 v1 ... u5 v5` as reals.
std::map<std::string, std::vector<Detection>> parse_landmarks(std::istream& in);
std::map<std::string, std::vector<Detection>> parse_landmarks_file(const std::string& path);

/// Sidecar mapping `path w h` per line, for box files that carry no dims.
std::map<std::string, std::pair<double, double>> parse_dims_file(const std::string& path);

/// Manufacture weakly supervised global poses: every ground-truth face takes
/// its max-IoU detection, is skipped if that IoU is below `min_iou`, and
/// otherwise gets a pose solved from the detection's five landmarks in the
/// detection-crop frame and converted to the image frame. Only the pose is
/// stored; detection boxes and landmarks are discarded. Ground-truth boxes
/// are never modified.
ImageRecord weak_label(const ImageRecord& record,
                       const std::vector<Detection>& detections,
                       const FaceMesh& mesh, double min_iou = 0.5,
                       const SolverConfig& cfg = {});

/// Geometric augmentation. Scale multiplies image dims, boxes, and
/// landmarks and leaves global poses untouched (the whole-image camera
/// scales along). Mirror reflects horizontally: boxes and landmarks flip
/// (landmark semantics re-ordered left<->right) and poses map to
/// (r_x, -r_y, -r_z), (-t_x, t_y, t_z). Crop rebases poses onto the region
/// as a new image; faces whose box center falls outside are dropped.
struct AugmentSpec {
  bool mirror = false;
  double scale = 1.0;
  std::optional<BBox> crop;
};

ImageRecord augment(const ImageRecord& record, const AugmentSpec& spec);

/// The image-size policy used when sampling augmentations.
struct SizePolicy {
  std::vector<double> min_sizes = {640, 672, 704, 736, 768, 800};
  double max_size = 1400;
};

/// Deterministic xorshift-based generator so sampled augmentations are
/// reproducible independent of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  std::size_t index(std::size_t n);  // [0, n)

 private:
  std::uint64_t state_[4];
};

AugmentSpec sample_augment_spec(Rng& rng, double img_w, double img_h,
                                const SizePolicy& policy = {});

/// Versioned line-oriented dataset: one `v1` record per line, full-precision
/// round trip of every field.
void write_dataset(const std::vector<ImageRecord>& records, std::ostream& out);
void write_dataset_file(const std::vector<ImageRecord>& records, const std::string& path);
std::vector<ImageRecord> read_dataset(std::istream& in);
std::vector<ImageRecord> read_dataset_file(const std::string& path);

}  // namespace facepose
