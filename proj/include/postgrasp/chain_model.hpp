#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "postgrasp/geometry.hpp"

namespace postgrasp {

using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

enum class JointKind { revolute, prismatic };

struct JointSpec {
  JointKind kind = JointKind::revolute;
  /// Unit axis in the joint frame.
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  /// Parent link frame to joint frame, at zero joint displacement.
  Pose origin;
  double lower = -M_PI;
  double upper = M_PI;
  double velocity_limit = 1.0;
};

struct LinkSpec {
  double mass = 0.0;
  /// Centre of mass in the link frame.
  Eigen::Vector3d com = Eigen::Vector3d::Zero();
  /// Inertia about the CoM, link-frame axes.
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();

  SpatialInertia spatial_inertia() const { return SpatialInertia::from_rigid_body(mass, com, inertia); }
};

/**
 * @brief Serial chain described joint by joint, URDF style.
 *
 * Link i's frame is link (i-1)'s frame times joints[i].origin times the joint
 * motion. The base pose places link 0's parent in the world; the tool
 * transform places the operational point on the last link.
 *
 * The constructor validates every joint and link and throws
 * std::invalid_argument naming the offending element.
 */
class ChainModel {
 public:
  ChainModel(std::string name, Pose base, std::vector<JointSpec> joints, std::vector<LinkSpec> links,
             Pose tool);

  const std::string& name() const { return name_; }
  const Pose& base() const { return base_; }
  const Pose& tool() const { return tool_; }
  const std::vector<JointSpec>& joints() const { return joints_; }
  const std::vector<LinkSpec>& links() const { return links_; }
  int dof() const { return static_cast<int>(joints_.size()); }

  Eigen::VectorXd lower_limits() const;
  Eigen::VectorXd upper_limits() const;
  Eigen::VectorXd mid_range() const;

  ChainModel with_base(const Pose& base) const;
  ChainModel with_tool(const Pose& tool) const;

 private:
  std::string name_;
  Pose base_;
  std::vector<JointSpec> joints_;
  std::vector<LinkSpec> links_;
  Pose tool_;
};

/// World-frame quantities for every joint of a configuration.
struct ChainKinematics {
  std::vector<Pose> link_frames;        ///< world pose of each link frame
  std::vector<Eigen::Vector3d> axes;    ///< world joint axes
  std::vector<Eigen::Vector3d> anchors; ///< world point on each joint axis
  Pose tool;                            ///< world pose of the operational point
};

/// Throws std::invalid_argument if q.size() != model.dof().
ChainKinematics chain_kinematics(const ChainModel& model, const Eigen::VectorXd& q);

Pose forward_kinematics(const ChainModel& model, const Eigen::VectorXd& q);

/// World-frame Jacobian of the operational point, rows (linear; angular).
Jacobian geometric_jacobian(const ChainModel& model, const Eigen::VectorXd& q);
Jacobian geometric_jacobian(const ChainKinematics& kin, const ChainModel& model);

}  // namespace postgrasp
