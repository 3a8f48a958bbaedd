#include "uavnav/lie.hpp"

#include <cmath>

namespace uavnav {

Mat5 SE23Element::matrix() const {
  Mat5 m = Mat5::Identity();
  m.block<3, 3>(0, 0) = R;
  m.block<3, 1>(0, 3) = v;
  m.block<3, 1>(0, 4) = p;
  return m;
}

SE23Element SE23Element::inverse() const {
  SE23Element out;
  out.R = R.transpose();
  out.v = -out.R * v;
  out.p = -out.R * p;
  return out;
}

SE23Element SE23Element::operator*(const SE23Element& rhs) const {
  SE23Element out;
  out.R = R * rhs.R;
  out.v = R * rhs.v + v;
  out.p = R * rhs.p + p;
  return out;
}

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
      -w.y(), w.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) {
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

Mat3 so3_exp(const Vec3& theta) {
  if (!theta.allFinite()) {
    throw std::invalid_argument("so3_exp: non-finite rotation vector");
  }
  const double angle = theta.norm();
  const Mat3 W = skew(theta);
  double c1, c2;  // sin(a)/a and (1-cos(a))/a^2
  if (angle < kSmallAngle) {
    const double a2 = angle * angle;
    c1 = 1.0 - a2 / 6.0;
    c2 = 0.5 - a2 / 24.0;
  } else {
    c1 = std::sin(angle) / angle;
    c2 = (1.0 - std::cos(angle)) / (angle * angle);
  }
  return Mat3::Identity() + c1 * W + c2 * W * W;
}

Vec3 so3_log(const Mat3& R) {
  const double tr = R.trace();
  const double cos_angle = std::min(1.0, std::max(-1.0, 0.5 * (tr - 1.0)));
  const double angle = std::acos(cos_angle);
  if (angle > M_PI - kLogSingularityMargin) {
    throw NearSingularityError("so3_log: rotation angle within margin of pi");
  }
  const Vec3 w = vee(R - R.transpose());
  if (angle < kSmallAngle) {
    return 0.5 * w;
  }
  return (0.5 * angle / std::sin(angle)) * w;
}

Mat3 left_jacobian(const Vec3& theta) {
  if (!theta.allFinite()) {
    throw std::invalid_argument("left_jacobian: non-finite rotation vector");
  }
  const double angle = theta.norm();
  if (angle < kSmallAngle) {
    const Mat3 W = skew(theta);
    return Mat3::Identity() + 0.5 * W + (1.0 / 6.0) * W * W;
  }
  const Vec3 a = theta / angle;
  const double s = std::sin(angle) / angle;
  return s * Mat3::Identity() + (1.0 - s) * (a * a.transpose()) +
         ((1.0 - std::cos(angle)) / angle) * skew(a);
}

Vec3 apply_left_jacobian_inverse(const Vec3& theta, const Vec3& rhs) {
  return left_jacobian(theta).fullPivLu().solve(rhs);
}

SE23Element se23_exp(const TangentSE23& xi) {
  SE23Element g;
  g.R = so3_exp(xi.theta);
  const Mat3 Jl = left_jacobian(xi.theta);
  g.v = Jl * xi.dv;
  g.p = Jl * xi.dp;
  return g;
}

TangentSE23 se23_log(const SE23Element& g) {
  TangentSE23 xi;
  xi.theta = so3_log(g.R);
  xi.dv = apply_left_jacobian_inverse(xi.theta, g.v);
  xi.dp = apply_left_jacobian_inverse(xi.theta, g.p);
  return xi;
}

bool is_rotation(const Mat3& R, double tol) {
  const Mat3 err = R.transpose() * R - Mat3::Identity();
  return err.cwiseAbs().maxCoeff() < tol && std::abs(R.determinant() - 1.0) < tol;
}

Mat3 orthonormalize(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    out = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return out;
}

}  // namespace uavnav
