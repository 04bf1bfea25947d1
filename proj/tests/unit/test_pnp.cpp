#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "facepose/pnp.hpp"
#include "facepose/rotation.hpp"
#include "support/oracles.hpp"

using namespace facepose;

namespace {

Pose6DoF random_front_pose(oracles::TestRng& rng, double tz_lo = 2.0,
                           double tz_hi = 20.0) {
  const EulerAngles e{rng.uniform(-60, 60), rng.uniform(-89, 89), rng.uniform(-60, 60)};
  return {mat_to_rot_vec(mat_from_euler(e)),
          {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(tz_lo, tz_hi)}};
}

double rotation_error_rad(const Pose6DoF& a, const Pose6DoF& b) {
  return rotation_angle_between(rot_vec_to_mat(a.rotation), rot_vec_to_mat(b.rotation));
}

}  // namespace

TEST_CASE("solve_pnp recovers the generator from noiseless calibration points") {
  oracles::TestRng rng(51);
  const CalibrationPoints calib = default_calibration_points(FaceMesh::canonical());
  const Intrinsics k = image_intrinsics(400, 400);

  double worst_rot = 0.0, worst_t = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Pose6DoF truth = random_front_pose(rng);
    const Correspondences c{calib.points, project(calib.points, truth, k)};
    const PnpResult got = solve_pnp(c, k);

    worst_rot = std::max(worst_rot, rotation_error_rad(got.pose, truth));
    worst_t = std::max(worst_t, (got.pose.translation - truth.translation).norm() /
                                    truth.translation.norm());
    CHECK(got.rmse < 1e-6);
  }
  CHECK(worst_rot < 1e-6);
  CHECK(worst_t < 1e-8);
}

TEST_CASE("solve_pnp: identity rotation at depth five") {
  const CalibrationPoints calib = default_calibration_points(FaceMesh::canonical());
  const Intrinsics k = image_intrinsics(400, 400);
  const Pose6DoF truth{Vec3::Zero(), {0, 0, 5}};
  const PnpResult got = solve_pnp({calib.points, project(calib.points, truth, k)}, k);
  CHECK(got.pose.rotation.norm() < 1e-6);
  CHECK((got.pose.translation - truth.translation).norm() < 5e-8 * 5.0);
}

TEST_CASE("solve_pnp rejects degenerate input") {
  const Intrinsics k = image_intrinsics(400, 400);

  SUBCASE("collinear 3D points") {
    PointSet3 p3(3, 5);
    for (int i = 0; i < 5; ++i) p3.col(i) << i * 0.1, 2.0 * i * 0.1, -i * 0.1;
    PointSet2 p2(2, 5);
    for (int i = 0; i < 5; ++i) p2.col(i) << 100.0 + i, 100.0 - i;
    CHECK_THROWS_AS(solve_pnp({p3, p2}, k), NumericError);
  }
  SUBCASE("count mismatch") {
    CHECK_THROWS_AS(solve_pnp({PointSet3::Random(3, 5), PointSet2::Random(2, 4)}, k),
                    DataError);
  }
  SUBCASE("too few points") {
    CHECK_THROWS_AS(solve_pnp({PointSet3::Random(3, 3), PointSet2::Random(2, 3)}, k),
                    DataError);
  }
  SUBCASE("bad config") {
    SolverConfig cfg;
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(solve_pnp({PointSet3::Random(3, 5), PointSet2::Random(2, 5)}, k, cfg),
                    DataError);
  }
}

TEST_CASE("solve_pnp handles an exactly planar point set") {
  oracles::TestRng rng(52);
  const Intrinsics k = image_intrinsics(640, 480);
  PointSet3 planar(3, 8);
  for (int i = 0; i < 8; ++i)
    planar.col(i) << rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0;

  for (int trial = 0; trial < 50; ++trial) {
    const Pose6DoF truth = random_front_pose(rng, 3.0, 12.0);
    const PnpResult got = solve_pnp({planar, project(planar, truth, k)}, k);
    CHECK(rotation_error_rad(got.pose, truth) < 1e-6);
    CHECK((got.pose.translation - truth.translation).norm() /
              truth.translation.norm() <
          1e-8);
  }
}

TEST_CASE("solution is invariant under permutation of correspondences") {
  oracles::TestRng rng(53);
  const PointSet3 ref = FaceMesh::canonical().sixty_eight_point_reference();
  const Intrinsics k = image_intrinsics(640, 480);
  const Pose6DoF truth = random_front_pose(rng);
  const PointSet2 q = project(ref, truth, k);

  const PnpResult direct = solve_pnp({ref, q}, k);

  std::vector<int> perm(ref.cols());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::shuffle(perm.begin(), perm.end(), rng.engine);
  PointSet3 ref_p(3, ref.cols());
  PointSet2 q_p(2, ref.cols());
  for (size_t i = 0; i < perm.size(); ++i) {
    ref_p.col(i) = ref.col(perm[i]);
    q_p.col(i) = q.col(perm[i]);
  }
  const PnpResult shuffled = solve_pnp({ref_p, q_p}, k);

  CHECK((direct.pose.translation - shuffled.pose.translation).norm() < 1e-8);
  CHECK(rotation_error_rad(direct.pose, shuffled.pose) < 1e-8);
}

TEST_CASE("RMSE trace never increases across accepted steps") {
  oracles::TestRng rng(54);
  const CalibrationPoints calib = default_calibration_points(FaceMesh::canonical());
  const Intrinsics k = image_intrinsics(400, 400);
  for (int trial = 0; trial < 100; ++trial) {
    const Pose6DoF truth = random_front_pose(rng);
    PointSet2 q = project(calib.points, truth, k);
    for (Eigen::Index i = 0; i < q.size(); ++i) q(i) += rng.gaussian(1.0);
    const PnpResult got = solve_pnp({calib.points, q}, k);
    for (size_t i = 1; i < got.rmse_trace.size(); ++i)
      CHECK(got.rmse_trace[i] <= got.rmse_trace[i - 1] + 1e-12);
  }
}

TEST_CASE("reprojection_rmse matches an elementwise oracle") {
  oracles::TestRng rng(55);
  const CalibrationPoints calib = default_calibration_points(FaceMesh::canonical());
  const Intrinsics k = image_intrinsics(400, 400);
  const Pose6DoF truth = random_front_pose(rng);
  const Correspondences c{calib.points, project(calib.points, truth, k)};

  CHECK(reprojection_rmse(truth, c, k) <= 1e-9);

  Pose6DoF shifted = truth;
  shifted.translation.x() += 1.0;
  CHECK(reprojection_rmse(shifted, c, k) > 0.0);

  // independent per-point computation
  const PointSet2 q = project(c.points3, shifted, k);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const double du = q(0, i) - c.points2(0, i);
    const double dv = q(1, i) - c.points2(1, i);
    sum += du * du + dv * dv;
  }
  CHECK(reprojection_rmse(shifted, c, k) ==
        doctest::Approx(std::sqrt(sum / 5.0)).epsilon(1e-12));
}

TEST_CASE("pose_from_landmarks: five and sixty-eight point variants") {
  oracles::TestRng rng(56);
  const FaceMesh& mesh = FaceMesh::canonical();
  const Intrinsics k = image_intrinsics(640, 480);
  const Pose6DoF truth = random_front_pose(rng, 3.0, 10.0);

  const PnpResult five = pose_from_landmarks(
      project(mesh.five_point_reference(), truth, k), mesh, LandmarkSet::FivePoint, k);
  CHECK(rotation_error_rad(five.pose, truth) < 1e-6);

  const PnpResult sixty_eight = pose_from_landmarks(
      project(mesh.sixty_eight_point_reference(), truth, k), mesh,
      LandmarkSet::SixtyEightPoint, k);
  CHECK(rotation_error_rad(sixty_eight.pose, truth) < 1e-6);

  CHECK_THROWS_AS(pose_from_landmarks(PointSet2::Random(2, 7), mesh,
                                      LandmarkSet::FivePoint, k),
                  DataError);
}

TEST_CASE("median rotation error stays under 2 degrees at 1px noise") {
  oracles::TestRng rng(57);
  const FaceMesh& mesh = FaceMesh::canonical();
  const PointSet3 ref = mesh.five_point_reference();
  const Intrinsics k = image_intrinsics(400, 400);

  std::vector<double> errors;
  for (int trial = 0; trial < 300; ++trial) {
    const EulerAngles e{rng.uniform(-45, 45), rng.uniform(-89, 89), rng.uniform(-45, 45)};
    const Pose6DoF truth{mat_to_rot_vec(mat_from_euler(e)),
                         {0.0, 0.0, rng.uniform(2.0, 8.0)}};
    PointSet2 q = project(ref, truth, k);
    for (Eigen::Index i = 0; i < q.size(); ++i) q(i) += rng.gaussian(1.0);
    try {
      const PnpResult got = solve_pnp({ref, q}, k);
      errors.push_back(rotation_error_rad(got.pose, truth) * 180.0 / M_PI);
    } catch (const NumericError&) {
      errors.push_back(180.0);  // a failed solve counts as a gross error
    }
  }
  std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
  CHECK(errors[errors.size() / 2] < 2.0);
}
