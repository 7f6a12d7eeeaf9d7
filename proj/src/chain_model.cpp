#include "postgrasp/chain_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace postgrasp {

namespace {

void validate_link(const LinkSpec& link, std::size_t i) {
  const std::string where = "links[" + std::to_string(i) + "]";
  if (!std::isfinite(link.mass) || link.mass < 0.0) {
    throw std::invalid_argument(where + ".mass must be finite and non-negative");
  }
  if (!link.com.allFinite()) throw std::invalid_argument(where + ".com must be finite");
  const Eigen::Matrix3d& I = link.inertia;
  if (!I.allFinite()) throw std::invalid_argument(where + ".inertia must be finite");
  const double scale = std::max(1e-12, I.cwiseAbs().maxCoeff());
  if ((I - I.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument(where + ".inertia must be symmetric");
  }
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(I).eigenvalues();
  const double tol = 1e-12 * scale;
  if (ev.minCoeff() < -tol) throw std::invalid_argument(where + ".inertia must be positive semidefinite");
  if (ev(0) + ev(1) < ev(2) - tol) {
    throw std::invalid_argument(where + ".inertia violates the triangle inequality");
  }
}

}  // namespace

ChainModel::ChainModel(std::string name, Pose base, std::vector<JointSpec> joints, std::vector<LinkSpec> links,
                       Pose tool)
    : name_(std::move(name)), base_(base), joints_(std::move(joints)), links_(std::move(links)), tool_(tool) {
  if (joints_.empty()) throw std::invalid_argument("chain needs at least one joint");
  if (joints_.size() != links_.size()) {
    throw std::invalid_argument("joint count (" + std::to_string(joints_.size()) + ") differs from link count (" +
                                std::to_string(links_.size()) + ")");
  }
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    JointSpec& j = joints_[i];
    const std::string where = "joints[" + std::to_string(i) + "]";
    const double n = j.axis.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) throw std::invalid_argument(where + ".axis must be a unit vector");
    if (std::abs(n - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) j.axis /= n;
    if (!(j.lower < j.upper)) throw std::invalid_argument(where + ".limits must satisfy min < max");
    if (!(j.velocity_limit > 0.0)) throw std::invalid_argument(where + ".velocity_limit must be positive");
    validate_link(links_[i], i);
  }
}

Eigen::VectorXd ChainModel::lower_limits() const {
  Eigen::VectorXd v(dof());
  for (int i = 0; i < dof(); ++i) v(i) = joints_[i].lower;
  return v;
}

Eigen::VectorXd ChainModel::upper_limits() const {
  Eigen::VectorXd v(dof());
  for (int i = 0; i < dof(); ++i) v(i) = joints_[i].upper;
  return v;
}

Eigen::VectorXd ChainModel::mid_range() const { return 0.5 * (lower_limits() + upper_limits()); }

ChainModel ChainModel::with_base(const Pose& base) const {
  ChainModel copy = *this;
  copy.base_ = base;
  return copy;
}

ChainModel ChainModel::with_tool(const Pose& tool) const {
  ChainModel copy = *this;
  copy.tool_ = tool;
  return copy;
}

ChainKinematics chain_kinematics(const ChainModel& model, const Eigen::VectorXd& q) {
  const int n = model.dof();
  if (q.size() != n) {
    throw std::invalid_argument("configuration has " + std::to_string(q.size()) + " entries, model has " +
                                std::to_string(n) + " joints");
  }
  ChainKinematics kin;
  kin.link_frames.reserve(n);
  kin.axes.reserve(n);
  kin.anchors.reserve(n);
  Pose frame = model.base();
  for (int i = 0; i < n; ++i) {
    const JointSpec& joint = model.joints()[i];
    const Pose joint_frame = frame * joint.origin;
    kin.axes.push_back(joint_frame.rotation * joint.axis);
    kin.anchors.push_back(joint_frame.translation);
    Pose motion;
    if (joint.kind == JointKind::revolute) {
      motion.rotation = Rotation::from_axis_angle(joint.axis, q(i));
    } else {
      motion.translation = joint.axis * q(i);
    }
    frame = joint_frame * motion;
    kin.link_frames.push_back(frame);
  }
  kin.tool = frame * model.tool();
  return kin;
}

Pose forward_kinematics(const ChainModel& model, const Eigen::VectorXd& q) { return chain_kinematics(model, q).tool; }

Jacobian geometric_jacobian(const ChainKinematics& kin, const ChainModel& model) {
  const int n = model.dof();
  Jacobian j(6, n);
  const Eigen::Vector3d& p = kin.tool.translation;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& z = kin.axes[i];
    if (model.joints()[i].kind == JointKind::revolute) {
      j.col(i) << z.cross(p - kin.anchors[i]), z;
    } else {
      j.col(i) << z, Eigen::Vector3d::Zero();
    }
  }
  return j;
}

Jacobian geometric_jacobian(const ChainModel& model, const Eigen::VectorXd& q) {
  return geometric_jacobian(chain_kinematics(model, q), model);
}

}  // namespace postgrasp
