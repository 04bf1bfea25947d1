#pragma once

#include <vector>

#include "facepose/camera.hpp"
#include "facepose/face_model.hpp"
#include "facepose/types.hpp"

namespace facepose {

/// Matched 2D-3D point sets, one column per correspondence.
struct Correspondences {
  PointSet3 points3;
  PointSet2 points2;
};

struct SolverConfig {
  int max_iterations = 100;
  double step_tol = 1e-10;        // convergence threshold on the parameter step
  double initial_damping = 1e-3;  // LM lambda; x10 on reject, /10 on accept
};

struct PnpResult {
  Pose6DoF pose;
  double rmse = 0.0;  // converged reprojection RMSE, pixels
  int iterations = 0;
  std::vector<double> rmse_trace;  // RMSE after each accepted step
};

/// Root mean square of the per-point 2D reprojection residuals, pixels.
double reprojection_rmse(const Pose6DoF& pose, const Correspondences& c,
                         const Intrinsics& k);

/// Recover the pose minimizing squared reprojection error.
///
/// Initialization is a scaled-orthographic fit, except for near-planar point
/// sets where that system is rank-deficient; those start from a plane
/// homography decomposition instead. Levenberg-Marquardt then refines all
/// six parameters. Throws DataError on malformed correspondences and
/// NumericError on degenerate geometry or failure to converge.
PnpResult solve_pnp(const Correspondences& c, const Intrinsics& k,
                    const SolverConfig& cfg = {});

enum class LandmarkSet { FivePoint, SixtyEightPoint };

/// PnP against the mesh subset matching a detector landmark layout.
/// FivePoint expects left eye, right eye, nose tip, left/right mouth corner;
/// SixtyEightPoint expects the standard 68-point ordering.
PnpResult pose_from_landmarks(const PointSet2& landmarks, const FaceMesh& mesh,
                              LandmarkSet which, const Intrinsics& k,
                              const SolverConfig& cfg = {});

}  // namespace facepose
