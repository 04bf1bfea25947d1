#include "facepose/pnp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>

#include "facepose/pose_transform.hpp"
#include "facepose/rotation.hpp"

namespace facepose {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const Correspondences& c) {
  const auto n = c.points3.cols();
  if (n != c.points2.cols())
    throw DataError("solve_pnp: 2D/3D correspondence counts differ");
  if (n < 4) throw DataError("solve_pnp: need at least 4 correspondences");
  if (!c.points3.allFinite() || !c.points2.allFinite())
    throw DataError("solve_pnp: non-finite correspondence");
}

/// Singular values of the centered 3D set; degeneracy and planarity tests.
Vec3 shape_spectrum(const PointSet3& p) {
  const PointSet3 centered = p.colwise() - Vec3(p.rowwise().mean());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  Vec3 sv = Vec3::Zero();
  sv.head(svd.singularValues().size()) = svd.singularValues();
  return sv;
}

/// Scaled-orthographic fit: rows of R and the translation from two linear
/// least-squares systems in normalized image coordinates.
LinearPose init_weak_perspective(const Correspondences& c, const Intrinsics& k) {
  const auto n = c.points3.cols();
  Eigen::MatrixXd a(n, 4);
  a.leftCols<3>() = c.points3.transpose();
  a.col(3).setOnes();
  Eigen::VectorXd u(n), v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 x = k.normalize(c.points2.col(i));
    u(i) = x.x();
    v(i) = x.y();
  }
  const auto qr = a.colPivHouseholderQr();
  const Eigen::Vector4d row_u = qr.solve(u);
  const Eigen::Vector4d row_v = qr.solve(v);

  const double s = 0.5 * (row_u.head<3>().norm() + row_v.head<3>().norm());
  if (!(s > 1e-12)) throw NumericError("solve_pnp: degenerate orthographic fit");

  Mat3 r;
  r.row(0) = row_u.head<3>().normalized();
  r.row(1) = row_v.head<3>().normalized();
  r.row(2) = r.row(0).cross(r.row(1));
  return {nearest_rotation(r), Vec3(row_u(3) / s, row_v(3) / s, 1.0 / s)};
}

/// Plane-homography decomposition for (near-)planar point sets.
LinearPose init_planar(const Correspondences& c, const Intrinsics& k) {
  const auto n = c.points3.cols();
  const Vec3 centroid = c.points3.rowwise().mean();
  const PointSet3 centered = c.points3.colwise() - centroid;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullU);
  const Vec3 e1 = svd.matrixU().col(0);
  const Vec3 e2 = svd.matrixU().col(1);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double px = e1.dot(centered.col(i));
    const double py = e2.dot(centered.col(i));
    const Vec2 x = k.normalize(c.points2.col(i));
    a.row(2 * i) << px, py, 1, 0, 0, 0, -x.x() * px, -x.x() * py, -x.x();
    a.row(2 * i + 1) << 0, 0, 0, px, py, 1, -x.y() * px, -x.y() * py, -x.y();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> hsvd(a, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 9, 1> hv = hsvd.matrixV().col(8);
  Mat3 h;
  h << hv(0), hv(1), hv(2), hv(3), hv(4), hv(5), hv(6), hv(7), hv(8);

  double lambda = 2.0 / (h.col(0).norm() + h.col(1).norm());
  if ((lambda * h.col(2)).z() < 0.0) lambda = -lambda;  // face in front

  Mat3 g;
  g.col(0) = lambda * h.col(0);
  g.col(1) = lambda * h.col(1);
  g.col(2) = g.col(0).cross(g.col(1));

  Mat3 plane;  // orthonormal plane basis, det +1
  plane.col(0) = e1;
  plane.col(1) = e2;
  plane.col(2) = e1.cross(e2);

  const Mat3 r = nearest_rotation(g * plane.transpose());
  return {r, lambda * h.col(2) - r * centroid};
}

Eigen::Matrix<double, 6, 1> pack(const Pose6DoF& p) { return p.as_vector(); }

Pose6DoF unpack(const Eigen::Matrix<double, 6, 1>& x) {
  return {x.head<3>(), x.tail<3>()};
}

/// Squared residual norm, infinite when the pose projects behind the camera.
double cost_at(const Eigen::Matrix<double, 6, 1>& x, const Correspondences& c,
               const Intrinsics& k, Eigen::VectorXd* residuals) {
  try {
    const PointSet2 q = project(c.points3, unpack(x), k);
    const PointSet2 d = q - c.points2;
    if (residuals) {
      residuals->resize(2 * c.points2.cols());
      *residuals = Eigen::Map<const Eigen::VectorXd>(d.data(), d.size());
    }
    return d.squaredNorm();
  } catch (const NumericError&) {
    return kInf;
  }
}

}  // namespace

double reprojection_rmse(const Pose6DoF& pose, const Correspondences& c,
                         const Intrinsics& k) {
  validate(c);
  const PointSet2 d = project(c.points3, pose, k) - c.points2;
  return std::sqrt(d.squaredNorm() / static_cast<double>(c.points2.cols()));
}

PnpResult solve_pnp(const Correspondences& c, const Intrinsics& k,
                    const SolverConfig& cfg) {
  validate(c);
  if (cfg.max_iterations < 1 || !(cfg.step_tol > 0.0) || !(cfg.initial_damping > 0.0))
    throw DataError("solve_pnp: invalid solver configuration");

  const Vec3 spectrum = shape_spectrum(c.points3);
  if (spectrum(1) <= 1e-8 * spectrum(0))
    throw NumericError("solve_pnp: collinear 3D points");
  const bool near_planar = spectrum(2) <= 0.05 * spectrum(0);

  const LinearPose init = near_planar ? init_planar(c, k) : init_weak_perspective(c, k);
  Eigen::Matrix<double, 6, 1> x = pack(from_linear(init));
  if (!(x(5) > 0.0)) throw NumericError("solve_pnp: initialization behind camera");

  const double n = static_cast<double>(c.points2.cols());
  Eigen::VectorXd r;
  double cost = cost_at(x, c, k, &r);
  if (!std::isfinite(cost)) throw NumericError("solve_pnp: initialization behind camera");

  PnpResult result;
  result.rmse_trace.push_back(std::sqrt(cost / n));

  double lambda = cfg.initial_damping;
  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    result.iterations = iter;

    // Central-difference Jacobian of the residual vector.
    Eigen::MatrixXd jac(r.size(), 6);
    for (int j = 0; j < 6; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(j)));
      auto xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      Eigen::VectorXd rp, rm;
      const double cp = cost_at(xp, c, k, &rp);
      const double cm = cost_at(xm, c, k, &rm);
      if (std::isfinite(cp) && std::isfinite(cm))
        jac.col(j) = (rp - rm) / (2.0 * h);
      else if (std::isfinite(cp))
        jac.col(j) = (rp - r) / h;
      else if (std::isfinite(cm))
        jac.col(j) = (r - rm) / h;
      else
        throw NumericError("solve_pnp: cannot evaluate Jacobian");
    }
    const Eigen::Matrix<double, 6, 6> jtj = jac.transpose() * jac;
    const Eigen::Matrix<double, 6, 1> g = jac.transpose() * r;
    const Eigen::Matrix<double, 6, 1> scale = jtj.diagonal().cwiseMax(1e-12);

    while (true) {
      const Eigen::Matrix<double, 6, 6> h =
          jtj + Eigen::Matrix<double, 6, 6>(lambda * scale.asDiagonal());
      const Eigen::Matrix<double, 6, 1> step = h.ldlt().solve(-g);
      if (step.norm() < cfg.step_tol) {  // cannot move: converged
        result.pose = unpack(x);
        result.rmse = std::sqrt(cost / n);
        return result;
      }
      const auto x_new = (x + step).eval();
      Eigen::VectorXd r_new;
      const double cost_new = cost_at(x_new, c, k, &r_new);
      if (cost_new < cost) {
        const double rel_drop = (cost - cost_new) / std::max(cost, 1e-300);
        x = x_new;
        r = std::move(r_new);
        cost = cost_new;
        result.rmse_trace.push_back(std::sqrt(cost / n));
        lambda = std::max(lambda * 0.1, 1e-15);
        if (step.norm() < cfg.step_tol || rel_drop < 1e-15) {
          result.pose = unpack(x);
          result.rmse = std::sqrt(cost / n);
          return result;
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e30) throw NumericError("solve_pnp: damping overflow, diverged");
    }
  }
  throw NumericError("solve_pnp: no convergence within max_iterations");
}

PnpResult pose_from_landmarks(const PointSet2& landmarks, const FaceMesh& mesh,
                              LandmarkSet which, const Intrinsics& k,
                              const SolverConfig& cfg) {
  const Eigen::Index expected = which == LandmarkSet::FivePoint ? 5 : 68;
  if (landmarks.cols() != expected)
    throw DataError("pose_from_landmarks: expected " + std::to_string(expected) +
                    " landmarks, got " + std::to_string(landmarks.cols()));
  const PointSet3 ref = which == LandmarkSet::FivePoint
                            ? mesh.five_point_reference()
                            : mesh.sixty_eight_point_reference();
  return solve_pnp({ref, landmarks}, k, cfg);
}

}  // namespace facepose
