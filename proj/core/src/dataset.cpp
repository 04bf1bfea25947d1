#include "facepose/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "facepose/losses.hpp"
#include "facepose/pose_transform.hpp"
#include "facepose/text_io.hpp"

namespace facepose {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string t;
  while (in >> t) tokens.push_back(std::move(t));
  return tokens;
}

[[noreturn]] void fail_line(size_t line_no, const std::string& what) {
  throw DataError("line " + std::to_string(line_no) + ": " + what);
}

/// Shared block reader for the box and landmark annotation formats.
template <typename FaceLineFn>
void read_blocks(std::istream& in, size_t values_per_face, FaceLineFn&& on_face) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string path = tokenize(line).front();

    if (!std::getline(in, line)) fail_line(line_no, "missing face count after '" + path + "'");
    ++line_no;
    const auto count_tokens = tokenize(line);
    if (count_tokens.size() != 1) fail_line(line_no, "expected a face count for '" + path + "'");
    const long declared = parse_long(count_tokens.front(), "face count");
    if (declared < 0) fail_line(line_no, "negative face count for '" + path + "'");

    for (long i = 0; i < declared; ++i) {
      if (!std::getline(in, line))
        throw DataError("'" + path + "': declared " + std::to_string(declared) +
                        " faces but file ended after " + std::to_string(i));
      ++line_no;
      const auto tokens = tokenize(line);
      if (tokens.size() != values_per_face)
        fail_line(line_no, "'" + path + "': expected " + std::to_string(values_per_face) +
                               " values per face, got " + std::to_string(tokens.size()));
      std::vector<double> values(tokens.size());
      for (size_t v = 0; v < tokens.size(); ++v)
        values[v] = parse_double(tokens[v], "face line");
      on_face(path, i == 0, values, line_no);
    }
    if (declared == 0) on_face(path, true, {}, line_no);
  }
}

BBox box_from(const std::vector<double>& v, size_t offset) {
  BBox b{v[offset], v[offset + 1], v[offset + 2], v[offset + 3]};
  if (!(b.w > 0.0) || !(b.h > 0.0))
    throw DataError("box with non-positive extent");
  return b;
}

// Standard 68-landmark horizontal-flip permutation.
std::array<int, 68> flip68_table() {
  std::array<int, 68> t{};
  for (int i = 0; i < 68; ++i) t[i] = i;
  auto swap_pair = [&](int a, int b) { t[a] = b; t[b] = a; };
  for (int i = 0; i < 8; ++i) swap_pair(i, 16 - i);          // jaw
  for (int i = 0; i < 5; ++i) swap_pair(17 + i, 26 - i);     // brows
  swap_pair(31, 35); swap_pair(32, 34);                      // nose base
  swap_pair(36, 45); swap_pair(37, 44); swap_pair(38, 43);   // eyes
  swap_pair(39, 42); swap_pair(40, 47); swap_pair(41, 46);
  swap_pair(48, 54); swap_pair(49, 53); swap_pair(50, 52);   // outer mouth
  swap_pair(55, 59); swap_pair(56, 58);
  swap_pair(60, 64); swap_pair(61, 63); swap_pair(65, 67);   // inner mouth
  return t;
}

PointSet2 mirror_landmarks(const PointSet2& lm, double img_w) {
  PointSet2 out(2, lm.cols());
  if (lm.cols() == 5) {
    static constexpr std::array<int, 5> flip5 = {1, 0, 2, 4, 3};
    for (int i = 0; i < 5; ++i) out.col(i) = lm.col(flip5[i]);
  } else if (lm.cols() == 68) {
    static const std::array<int, 68> flip = flip68_table();
    for (int i = 0; i < 68; ++i) out.col(i) = lm.col(flip[i]);
  } else {
    out = lm;
  }
  out.row(0) = img_w - out.row(0).array();
  return out;
}

const char* source_tag(LabelSource s) {
  switch (s) {
    case LabelSource::Human: return "human";
    case LabelSource::Weak: return "weak";
    default: return "none";
  }
}

LabelSource source_from_tag(const std::string& tag) {
  if (tag == "human") return LabelSource::Human;
  if (tag == "weak") return LabelSource::Weak;
  if (tag == "none") return LabelSource::None;
  throw DataError("unknown label source '" + tag + "'");
}

void check_annotation(const FaceAnnotation& face, const std::string& path) {
  if (face.pose_global && face.label_source == LabelSource::None)
    throw DataError("'" + path + "': face has a pose but label source 'none'");
  if (!face.pose_global && face.label_source != LabelSource::None)
    throw DataError("'" + path + "': label source without a pose");
}

}  // namespace

std::vector<ImageRecord> parse_boxes(std::istream& in) {
  std::vector<ImageRecord> records;
  read_blocks(in, 4, [&](const std::string& path, bool first,
                         const std::vector<double>& v, size_t) {
    if (first) records.push_back({path, 0.0, 0.0, {}});
    if (!v.empty()) records.back().faces.push_back({box_from(v, 0), {}, {}, {}, LabelSource::None});
  });
  return records;
}

std::map<std::string, std::vector<Detection>> parse_landmarks(std::istream& in) {
  std::map<std::string, std::vector<Detection>> out;
  read_blocks(in, 14, [&](const std::string& path, bool first,
                          const std::vector<double>& v, size_t) {
    if (first) out[path];
    if (v.empty()) return;
    Detection det{box_from(v, 0), PointSet2(2, 5)};
    for (int i = 0; i < 5; ++i) det.landmarks5.col(i) << v[4 + 2 * i], v[5 + 2 * i];
    out[path].push_back(std::move(det));
  });
  return out;
}

std::vector<ImageRecord> parse_boxes_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_boxes(in);
}

std::map<std::string, std::vector<Detection>> parse_landmarks_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_landmarks(in);
}

std::map<std::string, std::pair<double, double>> parse_dims_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::map<std::string, std::pair<double, double>> dims;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 3) fail_line(line_no, "expected 'path width height'");
    dims[tokens[0]] = {parse_double(tokens[1], "width"), parse_double(tokens[2], "height")};
  }
  return dims;
}

ImageRecord weak_label(const ImageRecord& record,
                       const std::vector<Detection>& detections,
                       const FaceMesh& mesh, double min_iou,
                       const SolverConfig& cfg) {
  if (!(record.width > 0.0) || !(record.height > 0.0))
    throw DataError("weak_label: record '" + record.path + "' has no image dimensions");

  ImageRecord out = record;
  for (auto& face : out.faces) {
    face.pose_global.reset();
    face.label_source = LabelSource::None;

    double best = -1.0;
    size_t best_j = 0;
    for (size_t j = 0; j < detections.size(); ++j) {
      const double v = iou(face.gt_box, detections[j].box);
      if (v > best) {
        best = v;
        best_j = j;
      }
    }
    if (best < min_iou) continue;

    const Detection& det = detections[best_j];
    PointSet2 local_lm = det.landmarks5;
    local_lm.row(0).array() -= det.box.x;
    local_lm.row(1).array() -= det.box.y;
    try {
      const Intrinsics k = crop_intrinsics(det.box.w, det.box.h);
      const Pose6DoF local = pose_from_landmarks(local_lm, mesh,
                                                 LandmarkSet::FivePoint, k, cfg)
                                 .pose;
      face.pose_global = local_to_global(local, det.box, record.width, record.height);
      face.label_source = LabelSource::Weak;
    } catch (const NumericError&) {
      // unsolvable detections leave the face unlabeled
    }
  }
  return out;
}

ImageRecord augment(const ImageRecord& record, const AugmentSpec& spec) {
  if (!(spec.scale > 0.0)) throw DataError("augment: scale must be positive");
  ImageRecord out = record;

  if (spec.scale != 1.0) {
    const double s = spec.scale;
    out.width *= s;
    out.height *= s;
    for (auto& face : out.faces) {
      face.gt_box = {face.gt_box.x * s, face.gt_box.y * s, face.gt_box.w * s,
                     face.gt_box.h * s};
      if (face.landmarks5) *face.landmarks5 *= s;
      if (face.landmarks68) *face.landmarks68 *= s;
      // global poses are scale-invariant: the whole-image camera scales along
    }
  }

  if (spec.mirror) {
    const double w = out.width;
    if (!(w > 0.0)) throw DataError("augment: mirror needs image dimensions");
    for (auto& face : out.faces) {
      face.gt_box.x = w - face.gt_box.x - face.gt_box.w;
      if (face.landmarks5) *face.landmarks5 = mirror_landmarks(*face.landmarks5, w);
      if (face.landmarks68) *face.landmarks68 = mirror_landmarks(*face.landmarks68, w);
      if (face.pose_global) {
        Pose6DoF& p = *face.pose_global;
        p.rotation = Vec3(p.rotation.x(), -p.rotation.y(), -p.rotation.z());
        p.translation = Vec3(-p.translation.x(), p.translation.y(), p.translation.z());
      }
    }
  }

  if (spec.crop) {
    const BBox r = *spec.crop;
    if (!(r.w > 0.0) || !(r.h > 0.0) || r.x < 0.0 || r.y < 0.0 ||
        r.x + r.w > out.width + 1e-9 || r.y + r.h > out.height + 1e-9)
      throw DataError("augment: crop region must lie within the image");

    std::vector<FaceAnnotation> kept;
    for (auto& face : out.faces) {
      const double cx = face.gt_box.cx(), cy = face.gt_box.cy();
      if (cx < r.x || cx >= r.x + r.w || cy < r.y || cy >= r.y + r.h) continue;
      FaceAnnotation moved = face;
      moved.gt_box.x -= r.x;
      moved.gt_box.y -= r.y;
      if (moved.landmarks5) {
        moved.landmarks5->row(0).array() -= r.x;
        moved.landmarks5->row(1).array() -= r.y;
      }
      if (moved.landmarks68) {
        moved.landmarks68->row(0).array() -= r.x;
        moved.landmarks68->row(1).array() -= r.y;
      }
      if (moved.pose_global)
        moved.pose_global = rebase_to_subimage(*moved.pose_global, r, out.width, out.height);
      kept.push_back(std::move(moved));
    }
    out.faces = std::move(kept);
    out.width = r.w;
    out.height = r.h;
  }
  return out;
}

Rng::Rng(std::uint64_t seed) {
  // splitmix64 expansion of the seed into xoshiro256** state
  std::uint64_t x = seed;
  for (auto& s : state_) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    s = z ^ (z >> 31);
  }
}

std::uint64_t Rng::next_u64() {
  auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::index(std::size_t n) {
  return n == 0 ? 0 : static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

AugmentSpec sample_augment_spec(Rng& rng, double img_w, double img_h,
                                const SizePolicy& policy) {
  if (!(img_w > 0.0) || !(img_h > 0.0))
    throw DataError("sample_augment_spec: image dimensions must be positive");
  AugmentSpec spec;

  const double target = policy.min_sizes[rng.index(policy.min_sizes.size())];
  double s = target / std::min(img_w, img_h);
  if (s * std::max(img_w, img_h) > policy.max_size)
    s = policy.max_size / std::max(img_w, img_h);
  spec.scale = s;

  spec.mirror = rng.uniform() < 0.5;

  const double sw = img_w * s, sh = img_h * s;
  const double cw = rng.uniform(0.6, 1.0) * sw;
  const double ch = rng.uniform(0.6, 1.0) * sh;
  const double ox = rng.uniform(0.0, sw - cw);
  const double oy = rng.uniform(0.0, sh - ch);
  spec.crop = BBox{ox, oy, cw, ch};
  return spec;
}

void write_dataset(const std::vector<ImageRecord>& records, std::ostream& out) {
  for (const auto& rec : records) {
    if (rec.path.find_first_of(" \t\n") != std::string::npos)
      throw DataError("dataset paths must not contain whitespace: '" + rec.path + "'");
    out << "v1 " << rec.path << ' ' << format_double(rec.width) << ' '
        << format_double(rec.height) << ' ' << rec.faces.size();
    for (const auto& face : rec.faces) {
      check_annotation(face, rec.path);
      out << " | box " << format_double(face.gt_box.x) << ' '
          << format_double(face.gt_box.y) << ' ' << format_double(face.gt_box.w)
          << ' ' << format_double(face.gt_box.h);
      auto write_points = [&](const char* tag, const PointSet2& pts) {
        out << ' ' << tag;
        for (Eigen::Index i = 0; i < pts.cols(); ++i)
          out << ' ' << format_double(pts(0, i)) << ' ' << format_double(pts(1, i));
      };
      if (face.landmarks5) write_points("lm5", *face.landmarks5);
      if (face.landmarks68) write_points("lm68", *face.landmarks68);
      if (face.pose_global) {
        const auto v = face.pose_global->as_vector();
        out << " pose";
        for (int i = 0; i < 6; ++i) out << ' ' << format_double(v(i));
      }
      out << " src " << source_tag(face.label_source);
    }
    out << '\n';
  }
}

std::vector<ImageRecord> read_dataset(std::istream& in) {
  std::vector<ImageRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens[0] != "v1")
      fail_line(line_no, "unsupported dataset version '" + tokens[0] + "'");
    if (tokens.size() < 5) fail_line(line_no, "truncated record header");

    ImageRecord rec;
    rec.path = tokens[1];
    rec.width = parse_double(tokens[2], "width");
    rec.height = parse_double(tokens[3], "height");
    const long n_faces = parse_long(tokens[4], "face count");

    size_t pos = 5;
    auto need = [&](const char* what) -> const std::string& {
      if (pos >= tokens.size()) fail_line(line_no, std::string("missing ") + what);
      return tokens[pos++];
    };
    for (long f = 0; f < n_faces; ++f) {
      if (need("face separator") != "|") fail_line(line_no, "expected '|'");
      if (need("box keyword") != "box") fail_line(line_no, "expected 'box'");
      FaceAnnotation face;
      double bv[4];
      for (double& v : bv) v = parse_double(need("box value"), "box");
      face.gt_box = {bv[0], bv[1], bv[2], bv[3]};
      if (!std::isfinite(bv[0]) || !std::isfinite(bv[1]) || !(face.gt_box.w > 0.0) ||
          !(face.gt_box.h > 0.0))
        fail_line(line_no, "box must be finite with positive extent");

      auto read_points = [&](Eigen::Index n) {
        PointSet2 pts(2, n);
        for (Eigen::Index i = 0; i < n; ++i) {
          pts(0, i) = parse_double(need("landmark"), "landmark");
          pts(1, i) = parse_double(need("landmark"), "landmark");
        }
        return pts;
      };
      while (pos < tokens.size() && tokens[pos] != "src" && tokens[pos] != "|") {
        const std::string& key = tokens[pos++];
        if (key == "lm5")
          face.landmarks5 = read_points(5);
        else if (key == "lm68")
          face.landmarks68 = read_points(68);
        else if (key == "pose") {
          Pose6DoF p;
          for (int i = 0; i < 3; ++i) p.rotation(i) = parse_double(need("pose"), "pose");
          for (int i = 0; i < 3; ++i) p.translation(i) = parse_double(need("pose"), "pose");
          if (!p.rotation.allFinite() || !p.translation.allFinite())
            fail_line(line_no, "pose must be finite");
          face.pose_global = p;
        } else {
          fail_line(line_no, "unknown face field '" + key + "'");
        }
      }
      if (need("src keyword") != "src") fail_line(line_no, "expected 'src'");
      face.label_source = source_from_tag(need("label source"));
      check_annotation(face, rec.path);
      rec.faces.push_back(std::move(face));
    }
    if (pos != tokens.size()) fail_line(line_no, "trailing data after last face");
    records.push_back(std::move(rec));
  }
  return records;
}

void write_dataset_file(const std::vector<ImageRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_dataset(records, out);
}

std::vector<ImageRecord> read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_dataset(in);
}

}  // namespace facepose
