#include "postgrasp/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace postgrasp {

Eigen::Matrix3d skew(const Eigen::Vector3d& a) {
  Eigen::Matrix3d s;
  s << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return s;
}

namespace {

Eigen::Quaterniond canonical(Eigen::Quaterniond q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("quaternion must be finite and non-zero");
  }
  // already-unit input is kept bit-for-bit so serialization round-trips exactly
  if (std::abs(n - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) q.coeffs() /= n;
  bool flip = q.w() < 0.0;
  if (q.w() == 0.0) {
    if (q.x() != 0.0) flip = q.x() < 0.0;
    else if (q.y() != 0.0) flip = q.y() < 0.0;
    else flip = q.z() < 0.0;
  }
  if (flip) q.coeffs() = -q.coeffs();
  return q;
}

}  // namespace

Rotation::Rotation(double w, double x, double y, double z) : q_(canonical(Eigen::Quaterniond(w, x, y, z))) {}

Rotation::Rotation(const Eigen::Quaterniond& q) : q_(canonical(q)) {}

Rotation Rotation::from_matrix(const Eigen::Matrix3d& r) { return Rotation(Eigen::Quaterniond(r)); }

Rotation Rotation::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  return Rotation(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized())));
}

Rotation Rotation::exp(const Eigen::Vector3d& v) {
  const double angle = v.norm();
  const double half = 0.5 * angle;
  // sin(half)/angle with a series fallback near zero
  const double k = angle < 1e-8 ? 0.5 - angle * angle / 48.0 : std::sin(half) / angle;
  return Rotation(std::cos(half), k * v.x(), k * v.y(), k * v.z());
}

Rotation Rotation::slerp(const Rotation& a, const Rotation& b, double t) {
  return Rotation(a.q_.slerp(t, b.q_));
}

Eigen::Vector3d Rotation::log() const {
  const Eigen::Vector3d v = q_.vec();
  const double s = v.norm();
  if (s < 1e-12) return 2.0 * v / q_.w();
  const double angle = 2.0 * std::atan2(s, q_.w());
  return (angle / s) * v;
}

Pose Pose::inverse() const {
  const Rotation r_inv = rotation.inverse();
  return {r_inv, -(r_inv * translation)};
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation.matrix();
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Pose compose(const Pose& a, const Pose& b) {
  return {a.rotation * b.rotation, a.translation + a.rotation * b.translation};
}

Vector6 Twist::vector() const {
  Vector6 u;
  u << linear, angular;
  return u;
}

Twist Twist::from_vector(const Vector6& u) { return {u.head<3>(), u.tail<3>()}; }

VelocityTransform::VelocityTransform(const Pose& t) : pose_(t) {
  const Eigen::Matrix3d r = t.rotation.matrix();
  e_.setZero();
  e_.topLeftCorner<3, 3>() = r;
  e_.topRightCorner<3, 3>() = skew(t.translation) * r;
  e_.bottomRightCorner<3, 3>() = r;
}

VelocityTransform velocity_transform(const Pose& t) { return VelocityTransform(t); }

Twist transform_twist(const Pose& t, const Twist& u) { return VelocityTransform(t) * u; }

SpatialInertia::SpatialInertia(const Matrix6& m) : m_(m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument("spatial inertia must be symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

SpatialInertia SpatialInertia::from_rigid_body(double mass, const Eigen::Vector3d& com,
                                               const Eigen::Matrix3d& inertia_about_com) {
  const Eigen::Matrix3d c = skew(com);
  Matrix6 m;
  m.topLeftCorner<3, 3>() = mass * Eigen::Matrix3d::Identity();
  m.topRightCorner<3, 3>() = -mass * c;
  m.bottomLeftCorner<3, 3>() = mass * c;
  m.bottomRightCorner<3, 3>() = inertia_about_com - mass * c * c;
  return SpatialInertia(m);
}

Eigen::Vector3d SpatialInertia::com() const {
  const double m = mass();
  if (m <= 0.0) return Eigen::Vector3d::Zero();
  // bottom-left block is m * skew(c)
  const Eigen::Matrix3d mc = m_.bottomLeftCorner<3, 3>();
  return Eigen::Vector3d(mc(2, 1), mc(0, 2), mc(1, 0)) / m;
}

Eigen::Matrix3d SpatialInertia::inertia_about_com() const {
  const Eigen::Matrix3d c = skew(com());
  return m_.bottomRightCorner<3, 3>() + mass() * c * c;
}

SpatialInertia transform_spatial_inertia(const SpatialInertia& m, const Pose& t) {
  // E^-1 = E(t^-1)
  const Matrix6 e_inv = VelocityTransform(t.inverse()).matrix();
  return SpatialInertia(e_inv.transpose() * m.matrix() * e_inv);
}

}  // namespace postgrasp
