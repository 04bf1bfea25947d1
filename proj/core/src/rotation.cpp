#include "facepose/rotation.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

namespace facepose {

namespace {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

}  // namespace

Mat3 rot_vec_to_mat(const RotationVector& rv) {
  if (!rv.allFinite()) throw NumericError("rot_vec_to_mat: non-finite rotation vector");
  const double theta = rv.norm();
  // R = I + a*[w]x + b*[w]x^2 with a = sin(t)/t, b = (1-cos(t))/t^2,
  // series near zero so the unnormalized vector can be used throughout.
  double a, b;
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0);
    b = 0.5 - t2 / 24.0 * (1.0 - t2 / 30.0);
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  const Mat3 k = skew(rv);
  return Mat3::Identity() + a * k + b * (k * k);
}

bool is_rotation(const Mat3& m, double tol) {
  const Mat3 mtm = m.transpose() * m;
  return (mtm - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(m.determinant() - 1.0) <= tol;
}

RotationVector mat_to_rot_vec(const Mat3& m) {
  if (!is_rotation(m, 1e-6))
    throw NumericError("mat_to_rot_vec: matrix is not orthonormal within 1e-6");

  // v = axis * sin(theta), c = cos(theta).
  const Vec3 v{0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
               0.5 * (m(1, 0) - m(0, 1))};
  const double s = v.norm();
  const double c = 0.5 * (m.trace() - 1.0);
  const double theta = std::atan2(s, c);

  if (theta < 1e-7) return v;  // axis*sin(t) ~ axis*t to O(t^3)

  if (theta < 2.9) return (theta / s) * v;

  // Near pi the antisymmetric part vanishes; recover the axis from the
  // symmetric part n n^T = (R_sym - c I) / (1 - c), anchored on the largest
  // diagonal entry so every component comes out of a well-conditioned ratio.
  const double one_minus_c = 1.0 - c;
  Vec3 n2{(m(0, 0) - c) / one_minus_c, (m(1, 1) - c) / one_minus_c,
          (m(2, 2) - c) / one_minus_c};
  int k = 0;
  n2.cwiseAbs().maxCoeff(&k);
  Vec3 n;
  n[k] = std::sqrt(std::max(n2[k], 0.0));
  const int i = (k + 1) % 3, j = (k + 2) % 3;
  n[i] = 0.5 * (m(i, k) + m(k, i)) / (one_minus_c * n[k]);
  n[j] = 0.5 * (m(j, k) + m(k, j)) / (one_minus_c * n[k]);

  // Global sign: from the antisymmetric part when it is usable, otherwise
  // (theta == pi to machine precision) first nonzero component positive.
  if (s > 1e-12) {
    if (v[k] < 0.0) n = -n;
  } else {
    for (int d = 0; d < 3; ++d) {
      if (std::abs(n[d]) > 1e-12) {
        if (n[d] < 0.0) n = -n;
        break;
      }
    }
  }
  return theta * n.normalized();
}

RotationVector canonicalize(const RotationVector& rv) {
  const double theta = rv.norm();
  if (theta == 0.0) return RotationVector::Zero();
  constexpr double two_pi = 2.0 * M_PI;
  double wrapped = std::fmod(theta, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  Vec3 axis = rv / theta;
  if (wrapped > M_PI) {
    wrapped = two_pi - wrapped;
    axis = -axis;
  }
  if (std::abs(wrapped - M_PI) < 1e-15) {
    for (int d = 0; d < 3; ++d) {
      if (std::abs(axis[d]) > 1e-12) {
        if (axis[d] < 0.0) axis = -axis;
        break;
      }
    }
  }
  return wrapped * axis;
}

Mat3 nearest_rotation(const GeneralLinear3& g) {
  if (!g.allFinite()) throw NumericError("nearest_rotation: non-finite input");
  Eigen::JacobiSVD<Mat3> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 1e-12 * std::max(sv(0), 1.0))
    throw NumericError("nearest_rotation: singular input");
  const double d = (svd.matrixU() * svd.matrixV().transpose()).determinant();
  return svd.matrixU() * Vec3(1.0, 1.0, d < 0.0 ? -1.0 : 1.0).asDiagonal() *
         svd.matrixV().transpose();
}

Mat3 mat_from_euler(const EulerAngles& e) {
  const double deg = M_PI / 180.0;
  const double ca = std::cos(e.pitch * deg), sa = std::sin(e.pitch * deg);
  const double cb = std::cos(e.yaw * deg), sb = std::sin(e.yaw * deg);
  const double cc = std::cos(e.roll * deg), sc = std::sin(e.roll * deg);
  Mat3 rx, ry, rz;
  rx << 1, 0, 0, 0, ca, -sa, 0, sa, ca;
  ry << cb, 0, sb, 0, 1, 0, -sb, 0, cb;
  rz << cc, -sc, 0, sc, cc, 0, 0, 0, 1;
  return rz * ry * rx;
}

EulerAngles euler_from_mat(const Mat3& m) {
  if (!is_rotation(m, 1e-6))
    throw NumericError("euler_from_mat: matrix is not orthonormal within 1e-6");
  const double rad2deg = 180.0 / M_PI;
  EulerAngles e;
  const double sb = -m(2, 0);
  e.yaw = std::asin(std::clamp(sb, -1.0, 1.0)) * rad2deg;
  if (90.0 - std::abs(e.yaw) < 1e-6) {
    e.gimbal_lock = true;
    e.roll = 0.0;
    // Only pitch -/+ roll is observable; fold everything into pitch.
    e.pitch = (sb > 0.0 ? std::atan2(m(0, 1), m(0, 2))
                        : std::atan2(-m(0, 1), -m(0, 2))) *
              rad2deg;
  } else {
    e.pitch = std::atan2(m(2, 1), m(2, 2)) * rad2deg;
    e.roll = std::atan2(m(1, 0), m(0, 0)) * rad2deg;
  }
  return e;
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const double c = std::clamp(0.5 * ((a.transpose() * b).trace() - 1.0), -1.0, 1.0);
  return std::acos(c);
}

}  // namespace facepose
