#include "postgrasp/grasp_task.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace postgrasp {

TaskTrajectory::TaskTrajectory(std::vector<double> times, std::vector<Pose> poses)
    : times_(std::move(times)), poses_(std::move(poses)) {
  if (poses_.size() < 2) throw std::invalid_argument("task trajectory needs at least two waypoints");
  if (times_.size() != poses_.size()) throw std::invalid_argument("task trajectory times and poses differ in length");
  if (times_.front() != 0.0) throw std::invalid_argument("task trajectory must start at t = 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]) || !std::isfinite(times_[i])) {
      throw std::invalid_argument("task trajectory times must increase strictly (waypoint " + std::to_string(i) + ")");
    }
  }
  for (const Pose& p : poses_) {
    if (!p.translation.allFinite()) throw std::invalid_argument("task trajectory poses must be finite");
  }
}

void RigidObject::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("object.mass must be positive");
  if (!inertia.allFinite() || (inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("object.inertia must be symmetric");
  }
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(inertia).eigenvalues();
  if (!(ev(0) > 0.0)) throw std::invalid_argument("object.inertia must be positive definite");
  if (ev(0) + ev(1) < ev(2) * (1.0 - 1e-12)) {
    throw std::invalid_argument("object.inertia violates the triangle inequality");
  }
}

SpatialInertia RigidObject::spatial_inertia() const {
  return SpatialInertia::from_rigid_body(mass, Eigen::Vector3d::Zero(), inertia);
}

Eigen::Matrix3d cuboid_inertia(double mass, const Eigen::Vector3d& extents) {
  const Eigen::Vector3d sq = extents.cwiseProduct(extents);
  return (mass / 12.0 * Eigen::Vector3d(sq.y() + sq.z(), sq.x() + sq.z(), sq.x() + sq.y())).asDiagonal();
}

SpatialInertia object_inertia_in_gripper_frame(const GraspCandidate& grasp, const SpatialInertia& object) {
  // pose of the object frame seen from the gripper
  return transform_spatial_inertia(object, grasp.object_to_gripper.inverse());
}

std::vector<Pose> gripper_trajectory(const TaskTrajectory& task, const GraspCandidate& grasp) {
  std::vector<Pose> out;
  out.reserve(task.size());
  for (const Pose& object_pose : task.poses()) out.push_back(object_pose * grasp.object_to_gripper);
  return out;
}

Eigen::VectorXd path_parameter(const TaskTrajectory& task) {
  const auto& poses = task.poses();
  const auto n = static_cast<Eigen::Index>(poses.size());
  Eigen::VectorXd s(n);
  s(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    s(i) = s(i - 1) + (poses[i].translation - poses[i - 1].translation).norm();
  }
  if (!(s(n - 1) > 0.0)) return index_parameter(poses.size());
  s /= s(n - 1);
  s(n - 1) = 1.0;
  return s;
}

Eigen::VectorXd index_parameter(std::size_t n) {
  return Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 0.0, 1.0);
}

std::vector<GraspCandidate> generate_grasp_sweep(const Pose& edge_start, const Pose& edge_end, int count) {
  if (count < 2) throw std::invalid_argument("grasp sweep needs count >= 2");
  std::vector<GraspCandidate> grasps;
  grasps.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double u = static_cast<double>(i) / (count - 1);
    Pose p;
    p.rotation = edge_start.rotation;
    p.translation = (1.0 - u) * edge_start.translation + u * edge_end.translation;
    if (i == count - 1) p.translation = edge_end.translation;
    char id[32];
    std::snprintf(id, sizeof id, "g%02d", i + 1);
    grasps.push_back({id, p});
  }
  return grasps;
}

TaskTrajectory resample(const TaskTrajectory& keyframes, int count) {
  if (count < 2) throw std::invalid_argument("resample count must be >= 2");
  const auto& kt = keyframes.times();
  const auto& kp = keyframes.poses();
  const double total = keyframes.total_time();
  std::vector<double> times(count);
  std::vector<Pose> poses(count);
  std::size_t seg = 0;
  for (int i = 0; i < count; ++i) {
    const double t = i == count - 1 ? total : total * i / (count - 1);
    while (seg + 2 < kt.size() && t > kt[seg + 1]) ++seg;
    const double u = std::clamp((t - kt[seg]) / (kt[seg + 1] - kt[seg]), 0.0, 1.0);
    times[i] = t;
    poses[i].translation = (1.0 - u) * kp[seg].translation + u * kp[seg + 1].translation;
    poses[i].rotation = Rotation::slerp(kp[seg].rotation, kp[seg + 1].rotation, u);
  }
  return {std::move(times), std::move(poses)};
}

}  // namespace postgrasp
