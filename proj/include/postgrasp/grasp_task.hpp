#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "postgrasp/geometry.hpp"

namespace postgrasp {

/// Timed object-CoM poses. Times start at 0 and increase strictly.
class TaskTrajectory {
 public:
  /// Throws std::invalid_argument on fewer than two waypoints, a non-zero
  /// first time or non-increasing times.
  TaskTrajectory(std::vector<double> times, std::vector<Pose> poses);

  const std::vector<double>& times() const { return times_; }
  const std::vector<Pose>& poses() const { return poses_; }
  std::size_t size() const { return poses_.size(); }
  double total_time() const { return times_.back(); }

  /// Same poses with new timestamps.
  TaskTrajectory retimed(std::vector<double> times) const { return {std::move(times), poses_}; }

 private:
  std::vector<double> times_;
  std::vector<Pose> poses_;
};

struct GraspCandidate {
  std::string id;
  /// Gripper frame expressed in the object frame, fixed for the whole task.
  Pose object_to_gripper;
};

struct RigidObject {
  double mass = 0.0;
  /// About the CoM, object-frame axes.
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
  Eigen::Vector3d extents = Eigen::Vector3d::Zero();

  /// Throws std::invalid_argument unless mass > 0 and the inertia is a
  /// physical (SPD, triangle-inequality) tensor.
  void validate() const;
  /// diag(m I, I_com) in the object frame.
  SpatialInertia spatial_inertia() const;
};

/// Uniform solid box inertia about its centre.
Eigen::Matrix3d cuboid_inertia(double mass, const Eigen::Vector3d& extents);

/// Object inertia re-expressed in the gripper frame for the given grasp.
SpatialInertia object_inertia_in_gripper_frame(const GraspCandidate& grasp, const SpatialInertia& object);

/// Pointwise world pose of the gripper: F_o(t_i) * oT_g.
std::vector<Pose> gripper_trajectory(const TaskTrajectory& task, const GraspCandidate& grasp);

/// Normalized arc length of the object translation; uniform when the
/// object does not translate.
Eigen::VectorXd path_parameter(const TaskTrajectory& task);

/// Uniform grid i / (N - 1), used by the index quadrature mode.
Eigen::VectorXd index_parameter(std::size_t n);

/// Throws std::invalid_argument if count < 2.
std::vector<GraspCandidate> generate_grasp_sweep(const Pose& edge_start, const Pose& edge_end, int count);

/// Piecewise linear translation and slerp orientation between keyframes,
/// sampled at `count` uniformly spaced times over [0, T].
TaskTrajectory resample(const TaskTrajectory& keyframes, int count);

}  // namespace postgrasp
