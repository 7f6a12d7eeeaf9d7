#include "postgrasp/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace postgrasp {

namespace {

void check_unit(const Vector6& u) {
  if (std::abs(u.norm() - 1.0) > 1e-9) throw std::invalid_argument("direction must be a unit 6-vector");
}

void check_grid(const JointTrajectory& joints, const Eigen::VectorXd& s, std::size_t poses) {
  if (static_cast<std::size_t>(s.size()) != joints.size() || (poses != 0 && poses != joints.size())) {
    throw std::invalid_argument("metric inputs disagree on waypoint count");
  }
}

MetricProfile make_profile(const JointTrajectory& joints, std::size_t n) {
  MetricProfile p;
  p.values.resize(static_cast<Eigen::Index>(n));
  p.near_singular.assign(n, false);
  p.unreachable.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) p.unreachable[i] = !joints.reachable[i];
  return p;
}

// Fill zero-motion entries from the nearest non-zero neighbour, preferring the previous one.
std::vector<Vector6> normalize_directions(std::vector<Vector6> raw) {
  constexpr double kZero = 1e-12;
  const std::size_t n = raw.size();
  std::vector<bool> moving(n);
  for (std::size_t i = 0; i < n; ++i) moving[i] = raw[i].norm() > kZero;
  const auto first = std::find(moving.begin(), moving.end(), true);
  if (first == moving.end()) throw MetricError("trajectory has no motion; direction-based metrics are undefined");
  for (std::size_t i = 0; i < n; ++i) {
    if (moving[i]) raw[i].normalize();
  }
  const auto k = static_cast<std::size_t>(first - moving.begin());
  for (std::size_t i = 0; i < k; ++i) raw[i] = raw[k];
  for (std::size_t i = k + 1; i < n; ++i) {
    if (!moving[i]) raw[i] = raw[i - 1];
  }
  return raw;
}

std::vector<Vector6> segment_twists(const std::vector<Pose>& poses, bool with_rotation) {
  if (poses.size() < 2) throw std::invalid_argument("directions need at least two poses");
  std::vector<Vector6> raw(poses.size());
  for (std::size_t i = 0; i + 1 < poses.size(); ++i) {
    raw[i].head<3>() = poses[i + 1].translation - poses[i].translation;
    raw[i].tail<3>() = with_rotation ? (poses[i + 1].rotation * poses[i].rotation.inverse()).log()
                                     : Eigen::Vector3d::Zero();
  }
  raw.back() = raw[raw.size() - 2];
  return raw;
}

}  // namespace

int MetricProfile::near_singular_count() const {
  return static_cast<int>(std::count(near_singular.begin(), near_singular.end(), true));
}

double trapezoid(const Eigen::VectorXd& s, const Eigen::VectorXd& values) {
  if (s.size() != values.size()) throw std::invalid_argument("trapezoid grid and values differ in length");
  double sum = 0.0;
  for (Eigen::Index i = 1; i < s.size(); ++i) sum += 0.5 * (s(i) - s(i - 1)) * (values(i) + values(i - 1));
  return sum;
}

double directional_manipulability(const Jacobian& j, const Vector6& direction) {
  check_unit(direction);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullU);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const Matrix6 u = svd.matrixU();
  double inverse = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double lambda = k < sigma.size() ? sigma(k) * sigma(k) : 0.0;
    const double along = u.col(k).dot(direction);
    if (lambda < kNullEigenvalue) {
      if (std::abs(along) > 1e-9) return 0.0;
      continue;
    }
    inverse += along * along / lambda;
  }
  return 1.0 / inverse;
}

std::vector<Vector6> twist_directions(const std::vector<Pose>& poses) {
  return normalize_directions(segment_twists(poses, true));
}

std::vector<Vector6> translation_directions(const std::vector<Pose>& poses) {
  return normalize_directions(segment_twists(poses, false));
}

EffectiveMass effective_mass(const ChainModel& model, const Eigen::VectorXd& q, const GraspCandidate& grasp,
                             const SpatialInertia& object, const Vector6& direction) {
  check_unit(direction);
  const Matrix6 inv = operational_mass_inverse(model, q, grasp, object);
  const double d = direction.dot(inv * direction);
  if (d < kSingularInverseMass) return {kEffectiveMassCap, true};
  return {std::min(1.0 / d, kEffectiveMassCap), false};
}

MetricProfile tov(const ChainModel& model, const JointTrajectory& joints, const std::vector<Pose>& gripper_poses,
                  const Eigen::VectorXd& s) {
  check_grid(joints, s, gripper_poses.size());
  const std::vector<Vector6> dirs = twist_directions(gripper_poses);
  MetricProfile p = make_profile(joints, joints.size());
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const Eigen::VectorXd q = joints.positions.row(static_cast<Eigen::Index>(i)).transpose();
    const double a2 = directional_manipulability(geometric_jacobian(model, q), dirs[i]);
    p.values(static_cast<Eigen::Index>(i)) = a2;
    p.near_singular[i] = a2 == 0.0;
  }
  p.integral = trapezoid(s, p.values);
  return p;
}

MetricProfile torque_effort(const ChainModel& model, const JointTrajectory& joints, const GraspCandidate& grasp,
                            const SpatialInertia& object, const Eigen::VectorXd& s, const MetricOptions& options) {
  check_grid(joints, s, 0);
  const Eigen::VectorXd w = options.torque_weights.value_or(Eigen::VectorXd::Ones(model.dof()));
  if (w.size() != model.dof() || (w.array() < 0.0).any()) {
    throw std::invalid_argument("torque weights must be one non-negative value per joint");
  }
  const ToolLoad load = object_inertia_in_gripper_frame(grasp, object);
  MetricProfile p = make_profile(joints, joints.size());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(joints.size()); ++i) {
    const Eigen::VectorXd tau =
        inverse_dynamics(model, joints.positions.row(i).transpose(), joints.velocities.row(i).transpose(),
                         joints.accelerations.row(i).transpose(), options.gravity, load);
    p.values(i) = (w.array() * tau.array().square()).sum();
  }
  p.integral = trapezoid(s, p.values);
  return p;
}

MetricProfile tem(const ChainModel& model, const JointTrajectory& joints, const std::vector<Pose>& gripper_poses,
                  const GraspCandidate& grasp, const SpatialInertia& object, const Eigen::VectorXd& s,
                  MassDirection mode) {
  check_grid(joints, s, gripper_poses.size());
  const std::vector<Vector6> dirs = mode == MassDirection::translational ? translation_directions(gripper_poses)
                                                                         : twist_directions(gripper_poses);
  MetricProfile p = make_profile(joints, joints.size());
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const Eigen::VectorXd q = joints.positions.row(static_cast<Eigen::Index>(i)).transpose();
    const EffectiveMass m = effective_mass(model, q, grasp, object, dirs[i]);
    p.values(static_cast<Eigen::Index>(i)) = m.value;
    p.near_singular[i] = m.near_singular;
  }
  p.integral = trapezoid(s, p.values);
  return p;
}

Eigen::VectorXd quadrature_grid(const TaskTrajectory& task, Quadrature mode) {
  return mode == Quadrature::arc_length ? path_parameter(task) : index_parameter(task.size());
}

GraspScorecard evaluate_grasp(const ChainModel& model, const TaskTrajectory& task, const GraspCandidate& grasp,
                              const RigidObject& object, const IkSettings& ik, const MetricOptions& options) {
  GraspScorecard card;
  card.grasp_id = grasp.id;
  const std::vector<Pose> gripper = gripper_trajectory(task, grasp);
  try {
    card.joints = track_trajectory(model, task.times(), gripper, ik);
  } catch (const InfeasibleGraspError& e) {
    card.infeasible_reason = e.what();
    return card;
  }
  const Eigen::VectorXd s = quadrature_grid(task, options.quadrature);
  const SpatialInertia inertia = object.spatial_inertia();
  card.tov_profile = tov(model, card.joints, gripper, s);
  card.tme_profile = torque_effort(model, card.joints, grasp, inertia, s, options);
  card.tem_profile = tem(model, card.joints, gripper, grasp, inertia, s, options.mass_direction);
  card.feasible = true;
  card.scalars = MetricScalars{card.tov_profile.integral, card.tme_profile.integral, card.tem_profile.integral};
  return card;
}

}  // namespace postgrasp
