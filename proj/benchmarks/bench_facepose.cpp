#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "facepose/face_model.hpp"
#include "facepose/losses.hpp"
#include "facepose/pnp.hpp"
#include "facepose/pose_transform.hpp"
#include "facepose/rotation.hpp"

using namespace facepose;

namespace {

std::vector<Pose6DoF> sample_poses(size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Pose6DoF> poses(n);
  for (auto& p : poses)
    p = {{u(rng), u(rng), u(rng)}, {u(rng), u(rng), 6.0 + u(rng)}};
  return poses;
}

}  // namespace

static void BM_RodriguesRoundTrip(benchmark::State& state) {
  const auto poses = sample_poses(256);
  size_t i = 0;
  for (auto _ : state) {
    const Mat3 m = rot_vec_to_mat(poses[i++ % poses.size()].rotation);
    benchmark::DoNotOptimize(mat_to_rot_vec(m));
  }
}
BENCHMARK(BM_RodriguesRoundTrip);

static void BM_ProjectMesh(benchmark::State& state) {
  const FaceMesh& mesh = FaceMesh::canonical();
  const Intrinsics k = image_intrinsics(1024, 768);
  const auto poses = sample_poses(256);
  size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(project(mesh.points(), poses[i++ % poses.size()], k));
}
BENCHMARK(BM_ProjectMesh);

static void BM_LocalToGlobal(benchmark::State& state) {
  const auto poses = sample_poses(256);
  const BBox box{120, 80, 256, 256};
  size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(local_to_global(poses[i++ % poses.size()], box, 1024, 768));
}
BENCHMARK(BM_LocalToGlobal);

static void BM_BBoxFromPose(benchmark::State& state) {
  const FaceMesh& mesh = FaceMesh::canonical();
  const Intrinsics k = image_intrinsics(1024, 768);
  const auto poses = sample_poses(256);
  size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bbox_from_pose(mesh, poses[i++ % poses.size()], k, BoxStyle::loose()));
}
BENCHMARK(BM_BBoxFromPose);

static void BM_SolvePnpFivePoint(benchmark::State& state) {
  const FaceMesh& mesh = FaceMesh::canonical();
  const Intrinsics k = image_intrinsics(400, 400);
  const PointSet3 ref = mesh.five_point_reference();
  const auto poses = sample_poses(64);
  std::vector<Correspondences> problems;
  for (const auto& p : poses) problems.push_back({ref, project(ref, p, k)});
  size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_pnp(problems[i++ % problems.size()], k));
}
BENCHMARK(BM_SolvePnpFivePoint);

static void BM_BoxVote(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ScoredBox> boxes;
  for (int i = 0; i < 100; ++i)
    boxes.push_back({{u(rng) * 500, u(rng) * 500, 30 + u(rng) * 60, 30 + u(rng) * 60},
                     u(rng)});
  for (auto _ : state) benchmark::DoNotOptimize(box_vote(boxes));
}
BENCHMARK(BM_BoxVote);

BENCHMARK_MAIN();
