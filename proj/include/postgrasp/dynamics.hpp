#pragma once

#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "postgrasp/chain_model.hpp"
#include "postgrasp/geometry.hpp"
#include "postgrasp/grasp_task.hpp"

namespace postgrasp {

/// Thrown when the joint-space inertia is too ill-conditioned to invert.
class DegenerateModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Eigen::Vector3d standard_gravity() { return {0.0, 0.0, -9.81}; }

/// Rigid body carried at the operational point, expressed in the tool frame
/// about its origin (the grasped object's gM_o).
using ToolLoad = std::optional<SpatialInertia>;

/// Default step for the Christoffel partials of the mass matrix.
inline constexpr double kChristoffelStep = 1e-6;

struct DynamicsEvaluation {
  Eigen::MatrixXd mass;      ///< M(q)
  Eigen::MatrixXd coriolis;  ///< C(q, qd), Christoffel form
  Eigen::VectorXd gravity;   ///< N(q)
};

/// Composite-rigid-body mass matrix, load included when given.
Eigen::MatrixXd mass_matrix(const ChainModel& model, const Eigen::VectorXd& q, const ToolLoad& load = std::nullopt);

/// Christoffel-symbol Coriolis matrix with central-difference partials of
/// mass_matrix.
Eigen::MatrixXd coriolis_matrix(const ChainModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                const ToolLoad& load = std::nullopt, double step = kChristoffelStep);

/// dV/dq, assembled from CoM Jacobians of every body.
Eigen::VectorXd gravity_vector(const ChainModel& model, const Eigen::VectorXd& q,
                               const Eigen::Vector3d& gravity = standard_gravity(),
                               const ToolLoad& load = std::nullopt);

/// Recursive Newton-Euler joint torques.
Eigen::VectorXd inverse_dynamics(const ChainModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                 const Eigen::VectorXd& qdd, const Eigen::Vector3d& gravity = standard_gravity(),
                                 const ToolLoad& load = std::nullopt);

DynamicsEvaluation evaluate_dynamics(const ChainModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                     const Eigen::Vector3d& gravity = standard_gravity(),
                                     const ToolLoad& load = std::nullopt);

/// M_arm(q) + J^T gM_o J, with gM_o the object's inertia in the gripper frame.
Eigen::MatrixXd augmented_mass_matrix(const ChainModel& model, const Eigen::VectorXd& q, const GraspCandidate& grasp,
                                      const SpatialInertia& object);

/// J M_tot^-1 J^T. Throws DegenerateModelError when cond(M_tot) > 1e12.
Matrix6 operational_mass_inverse(const ChainModel& model, const Eigen::VectorXd& q, const GraspCandidate& grasp,
                                 const SpatialInertia& object);
Matrix6 operational_mass_inverse(const ChainModel& model, const Eigen::VectorXd& q, const ToolLoad& load);

}  // namespace postgrasp
