#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "postgrasp/chain_model.hpp"
#include "postgrasp/geometry.hpp"

namespace postgrasp {

struct IkSettings {
  double damping = 1e-3;
  int max_iterations = 200;
  double position_tolerance = 1e-6;     ///< meters
  double orientation_tolerance = 1e-6;  ///< radians
  /// Seed for the first waypoint; mid-range of the joint limits when unset.
  std::optional<Eigen::VectorXd> seed;
  /// Track translation only (planar or under-actuated chains).
  bool position_only = false;
  /// Per-iteration clamp on the task-space error fed to the solver.
  double max_linear_step = 0.1;
  double max_angular_step = 0.5;
  /// Null-space pull toward the joint mid-range per iteration (redundant chains); 0 disables.
  double centering_gain = 0.0;

  /// Throws std::invalid_argument on non-positive damping, tolerances or step limits,
  /// or a centering gain outside [0, 1].
  void validate() const;
};

enum class IkStatus { converged, max_iterations };

struct IkResult {
  Eigen::VectorXd q;
  IkStatus status = IkStatus::max_iterations;
  int iterations = 0;
  double position_error = 0.0;
  double orientation_error = 0.0;

  bool converged() const { return status == IkStatus::converged; }
};

/// Task-space error (position; rotation vector) taking `current` onto `target`, world frame.
Vector6 pose_error(const Pose& target, const Pose& current);

/**
 * @brief Damped least-squares IK for one pose.
 *
 * Iterates dq = J^T (J J^T + damping^2 I)^-1 e from the seed, clamping to
 * the joint limits after every step. A target that cannot be met within
 * max_iterations comes back with status max_iterations and the last iterate.
 */
IkResult solve_waypoint(const ChainModel& model, const Pose& target, const Eigen::VectorXd& seed,
                        const IkSettings& settings);

/// Thrown when the first waypoint of a trajectory cannot be reached.
class InfeasibleGraspError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JointTrajectory {
  std::vector<double> times;
  Eigen::MatrixXd positions;      ///< N x n
  Eigen::MatrixXd velocities;     ///< N x n
  Eigen::MatrixXd accelerations;  ///< N x n
  std::vector<bool> reachable;

  std::size_t size() const { return times.size(); }
  bool all_reachable() const;
};

/// Three-point (possibly non-uniform) finite differences along rows;
/// one-sided stencils at both ends.
Eigen::MatrixXd differentiate(const std::vector<double>& times, const Eigen::MatrixXd& samples);
Eigen::MatrixXd differentiate_twice(const std::vector<double>& times, const Eigen::MatrixXd& samples);

/// IK at every pose, each seeded by the previous solution. Later waypoints
/// that fail are flagged unreachable and keep their best iterate.
JointTrajectory track_trajectory(const ChainModel& model, const std::vector<double>& times,
                                 const std::vector<Pose>& poses, const IkSettings& settings);

}  // namespace postgrasp
