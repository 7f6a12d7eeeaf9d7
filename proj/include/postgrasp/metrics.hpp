#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "postgrasp/chain_model.hpp"
#include "postgrasp/differential_ik.hpp"
#include "postgrasp/dynamics.hpp"
#include "postgrasp/grasp_task.hpp"

namespace postgrasp {

/// Raised when a metric is undefined for the given input, e.g. a task without motion.
class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kEffectiveMassCap = 1e9;         ///< kg
inline constexpr double kSingularInverseMass = 1e-9;     ///< 1/kg
inline constexpr double kNullEigenvalue = 1e-12;

enum class Quadrature { arc_length, index };
enum class MassDirection { translational, full_twist };

struct MetricOptions {
  Quadrature quadrature = Quadrature::arc_length;
  MassDirection mass_direction = MassDirection::translational;
  Eigen::Vector3d gravity = standard_gravity();
  /// Diagonal per-joint weights on tau^2; identity when unset.
  std::optional<Eigen::VectorXd> torque_weights;
};

struct MetricProfile {
  Eigen::VectorXd values;
  double integral = 0.0;
  std::vector<bool> near_singular;
  std::vector<bool> unreachable;

  int near_singular_count() const;
};

/// Trapezoidal rule of `values` over the grid `s`.
double trapezoid(const Eigen::VectorXd& s, const Eigen::VectorXd& values);

/**
 * @brief Squared radius of the velocity manipulability ellipsoid along a direction.
 *
 * a^2 = 1 / (u^T (J J^T)^-1 u). Directions of J J^T with eigenvalue below
 * 1e-12 count as exact null directions; any component of u along them gives
 * a^2 = 0. Throws std::invalid_argument unless |u| = 1 within 1e-9.
 */
double directional_manipulability(const Jacobian& j, const Vector6& direction);

/// Normalized 6D twist direction (translation difference; rotation log) of
/// each segment i -> i+1. The last waypoint repeats the previous segment;
/// zero-motion waypoints borrow the nearest non-zero neighbour.
/// Throws MetricError if no waypoint moves.
std::vector<Vector6> twist_directions(const std::vector<Pose>& poses);
/// As twist_directions but translation only, angular part zero.
std::vector<Vector6> translation_directions(const std::vector<Pose>& poses);

struct EffectiveMass {
  double value = 0.0;
  bool near_singular = false;
};

/// 1 / (u^T Lambda_tot^-1 u), capped at 1e9 kg (with flag) when the
/// denominator falls under 1e-9 1/kg.
EffectiveMass effective_mass(const ChainModel& model, const Eigen::VectorXd& q, const GraspCandidate& grasp,
                             const SpatialInertia& object, const Vector6& direction);

MetricProfile tov(const ChainModel& model, const JointTrajectory& joints, const std::vector<Pose>& gripper_poses,
                  const Eigen::VectorXd& s);

MetricProfile torque_effort(const ChainModel& model, const JointTrajectory& joints, const GraspCandidate& grasp,
                            const SpatialInertia& object, const Eigen::VectorXd& s,
                            const MetricOptions& options = {});

MetricProfile tem(const ChainModel& model, const JointTrajectory& joints, const std::vector<Pose>& gripper_poses,
                  const GraspCandidate& grasp, const SpatialInertia& object, const Eigen::VectorXd& s,
                  MassDirection mode = MassDirection::translational);

struct MetricScalars {
  double tov = 0.0;
  double tme = 0.0;
  double tem = 0.0;
};

struct GraspScorecard {
  std::string grasp_id;
  bool feasible = false;
  std::string infeasible_reason;
  std::optional<MetricScalars> scalars;  ///< empty when infeasible
  MetricProfile tov_profile;
  MetricProfile tme_profile;
  MetricProfile tem_profile;
  JointTrajectory joints;
};

/// Integration grid for a task under the chosen quadrature.
Eigen::VectorXd quadrature_grid(const TaskTrajectory& task, Quadrature mode);

/// Gripper trajectory, IK tracking, then the three profiles. An unreachable
/// first waypoint gives feasible == false; MetricError propagates.
GraspScorecard evaluate_grasp(const ChainModel& model, const TaskTrajectory& task, const GraspCandidate& grasp,
                              const RigidObject& object, const IkSettings& ik, const MetricOptions& options = {});

}  // namespace postgrasp
