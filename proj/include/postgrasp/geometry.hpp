#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace postgrasp {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Cross-product matrix: skew(a) * b == a.cross(b).
Eigen::Matrix3d skew(const Eigen::Vector3d& a);

/**
 * @brief Unit quaternion rotation.
 *
 * Always normalized and canonicalized so that w >= 0 (and, when w == 0, the
 * first non-zero vector component is positive). Two rotations that describe
 * the same orientation therefore compare equal component-wise.
 */
class Rotation {
 public:
  Rotation() = default;
  Rotation(double w, double x, double y, double z);
  explicit Rotation(const Eigen::Quaterniond& q);

  static Rotation identity() { return {}; }
  static Rotation from_matrix(const Eigen::Matrix3d& r);
  static Rotation from_axis_angle(const Eigen::Vector3d& axis, double angle);
  /// Exponential map of a rotation vector (axis * angle).
  static Rotation exp(const Eigen::Vector3d& rotation_vector);
  static Rotation slerp(const Rotation& a, const Rotation& b, double t);

  /// Rotation vector with angle in [0, pi].
  Eigen::Vector3d log() const;
  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }
  Rotation inverse() const { return Rotation(q_.conjugate()); }

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }
  const Eigen::Quaterniond& quaternion() const { return q_; }

  Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return q_ * v; }
  friend Rotation operator*(const Rotation& a, const Rotation& b) { return Rotation(a.q_ * b.q_); }

 private:
  Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
};

/// Rigid transform. As a map it sends coordinates in the child frame to the
/// parent frame: p_parent = rotation * p_child + translation.
struct Pose {
  Rotation rotation;
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return {}; }
  static Pose from_translation(const Eigen::Vector3d& t) { return {Rotation{}, t}; }
  static Pose from_rotation(const Rotation& r) { return {r, Eigen::Vector3d::Zero()}; }

  Pose inverse() const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return rotation * p + translation; }
  Eigen::Matrix4d matrix() const;
};

/// Pose of b's frame expressed where a's frame is expressed.
Pose compose(const Pose& a, const Pose& b);
inline Pose operator*(const Pose& a, const Pose& b) { return compose(a, b); }

/// Linear and angular velocity, ordered (linear; angular) when stacked.
struct Twist {
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular = Eigen::Vector3d::Zero();

  Vector6 vector() const;
  static Twist from_vector(const Vector6& u);
};

/**
 * @brief 6x6 map between twist coordinates of two rigidly attached frames.
 *
 * For a pose T of frame B expressed in frame A, E(T) = [R, skew(t) R; 0, R]
 * takes a twist of B (B's origin, B's axes) to the same rigid motion
 * described at A's origin in A's axes.
 */
class VelocityTransform {
 public:
  explicit VelocityTransform(const Pose& t);

  const Matrix6& matrix() const { return e_; }
  VelocityTransform inverse() const { return VelocityTransform(pose_.inverse()); }
  Twist operator*(const Twist& u) const { return Twist::from_vector(e_ * u.vector()); }
  const Pose& pose() const { return pose_; }

 private:
  Pose pose_;
  Matrix6 e_;
};

VelocityTransform velocity_transform(const Pose& t);
Twist transform_twist(const Pose& t, const Twist& u);

/**
 * @brief Symmetric 6x6 spatial inertia in (linear; angular) ordering,
 * taken about the origin of the frame it is expressed in.
 *
 * For a body of mass m with centre of mass c and inertia I_c about the CoM:
 *
 *     [ m I        -m skew(c)              ]
 *     [ m skew(c)   I_c - m skew(c) skew(c) ]
 */
class SpatialInertia {
 public:
  SpatialInertia() : m_(Matrix6::Zero()) {}
  /// Throws std::invalid_argument if the matrix is not symmetric within 1e-9.
  explicit SpatialInertia(const Matrix6& m);

  static SpatialInertia from_rigid_body(double mass, const Eigen::Vector3d& com,
                                        const Eigen::Matrix3d& inertia_about_com);
  static SpatialInertia zero() { return {}; }

  const Matrix6& matrix() const { return m_; }
  double mass() const { return m_(0, 0); }
  /// Centre of mass; zero for a massless body.
  Eigen::Vector3d com() const;
  Eigen::Matrix3d inertia_about_com() const;

  SpatialInertia scaled(double alpha) const { return SpatialInertia(alpha * m_); }
  friend SpatialInertia operator+(const SpatialInertia& a, const SpatialInertia& b) {
    return SpatialInertia(a.m_ + b.m_);
  }

 private:
  Matrix6 m_;
};

/// Re-express an inertia given in frame B into frame A, where t is the pose
/// of B in A: E^-T M E^-1 with E = velocity_transform(t).
SpatialInertia transform_spatial_inertia(const SpatialInertia& m, const Pose& t);

}  // namespace postgrasp
