#include "postgrasp/differential_ik.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace postgrasp {

void IkSettings::validate() const {
  if (!(damping > 0.0)) throw std::invalid_argument("IK damping must be positive");
  if (max_iterations < 0) throw std::invalid_argument("IK max_iterations must be non-negative");
  if (!(position_tolerance > 0.0) || !(orientation_tolerance > 0.0)) {
    throw std::invalid_argument("IK tolerances must be positive");
  }
  if (!(centering_gain >= 0.0) || centering_gain > 1.0) {
    throw std::invalid_argument("IK centering gain must lie in [0, 1]");
  }
  if (!(max_linear_step > 0.0) || !(max_angular_step > 0.0)) {
    throw std::invalid_argument("IK step limits must be positive");
  }
}

bool JointTrajectory::all_reachable() const {
  return std::all_of(reachable.begin(), reachable.end(), [](bool r) { return r; });
}

Vector6 pose_error(const Pose& target, const Pose& current) {
  Vector6 e;
  e << target.translation - current.translation, (target.rotation * current.rotation.inverse()).log();
  return e;
}

IkResult solve_waypoint(const ChainModel& model, const Pose& target, const Eigen::VectorXd& seed,
                        const IkSettings& settings) {
  settings.validate();
  if (seed.size() != model.dof()) throw std::invalid_argument("IK seed length differs from model dof");
  if (!target.translation.allFinite()) throw std::invalid_argument("IK target must be finite");

  const Eigen::VectorXd lower = model.lower_limits();
  const Eigen::VectorXd upper = model.upper_limits();
  const Eigen::VectorXd mid = 0.5 * (lower + upper);
  const int rows = settings.position_only ? 3 : 6;
  const double lambda2 = settings.damping * settings.damping;

  IkResult result;
  result.q = seed;
  for (int iter = 0;; ++iter) {
    const ChainKinematics kin = chain_kinematics(model, result.q);
    Vector6 e = pose_error(target, kin.tool);
    result.iterations = iter;
    result.position_error = e.head<3>().norm();
    result.orientation_error = e.tail<3>().norm();
    const bool done = result.position_error <= settings.position_tolerance &&
                      (settings.position_only || result.orientation_error <= settings.orientation_tolerance);
    if (done) {
      result.status = IkStatus::converged;
      return result;
    }
    if (iter == settings.max_iterations) break;

    if (result.position_error > settings.max_linear_step) e.head<3>() *= settings.max_linear_step / result.position_error;
    if (result.orientation_error > settings.max_angular_step) {
      e.tail<3>() *= settings.max_angular_step / result.orientation_error;
    }
    const Jacobian full = geometric_jacobian(kin, model);
    const Eigen::MatrixXd j = full.topRows(rows);
    Eigen::MatrixXd jjt = j * j.transpose();
    jjt.diagonal().array() += lambda2;
    const auto solver = jjt.ldlt();
    Eigen::VectorXd step = j.transpose() * solver.solve(e.head(rows));
    if (settings.centering_gain > 0.0) {
      // secondary objective in the (damped) null space: drift toward mid-range
      const Eigen::VectorXd pull = settings.centering_gain * (mid - result.q);
      step += pull - j.transpose() * solver.solve(j * pull);
    }
    result.q = (result.q + step).cwiseMax(lower).cwiseMin(upper);
  }
  result.status = IkStatus::max_iterations;
  return result;
}

namespace {

// Weights of the first and second derivative at x of the quadratic through (x0, x1, x2).
std::array<double, 3> first_derivative_weights(double x, double x0, double x1, double x2) {
  return {(2 * x - x1 - x2) / ((x0 - x1) * (x0 - x2)), (2 * x - x0 - x2) / ((x1 - x0) * (x1 - x2)),
          (2 * x - x0 - x1) / ((x2 - x0) * (x2 - x1))};
}

std::array<double, 3> second_derivative_weights(double x0, double x1, double x2) {
  return {2 / ((x0 - x1) * (x0 - x2)), 2 / ((x1 - x0) * (x1 - x2)), 2 / ((x2 - x0) * (x2 - x1))};
}

void check_samples(const std::vector<double>& times, const Eigen::MatrixXd& samples) {
  if (times.size() < 2 || static_cast<Eigen::Index>(times.size()) != samples.rows()) {
    throw std::invalid_argument("finite differences need >= 2 samples matching the time grid");
  }
}

}  // namespace

Eigen::MatrixXd differentiate(const std::vector<double>& times, const Eigen::MatrixXd& samples) {
  check_samples(times, samples);
  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd d(samples.rows(), samples.cols());
  if (n == 2) {
    d.row(0) = d.row(1) = (samples.row(1) - samples.row(0)) / (times[1] - times[0]);
    return d;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index c = std::clamp<Eigen::Index>(i, 1, n - 2);
    const auto w = first_derivative_weights(times[i], times[c - 1], times[c], times[c + 1]);
    d.row(i) = w[0] * samples.row(c - 1) + w[1] * samples.row(c) + w[2] * samples.row(c + 1);
  }
  return d;
}

Eigen::MatrixXd differentiate_twice(const std::vector<double>& times, const Eigen::MatrixXd& samples) {
  check_samples(times, samples);
  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(samples.rows(), samples.cols());
  if (n == 2) return d;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index c = std::clamp<Eigen::Index>(i, 1, n - 2);
    const auto w = second_derivative_weights(times[c - 1], times[c], times[c + 1]);
    d.row(i) = w[0] * samples.row(c - 1) + w[1] * samples.row(c) + w[2] * samples.row(c + 1);
  }
  return d;
}

JointTrajectory track_trajectory(const ChainModel& model, const std::vector<double>& times,
                                 const std::vector<Pose>& poses, const IkSettings& settings) {
  if (poses.size() < 2 || times.size() != poses.size()) {
    throw std::invalid_argument("tracking needs >= 2 poses with matching times");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("tracking times must increase strictly");
  }
  const auto n = static_cast<Eigen::Index>(poses.size());
  JointTrajectory out;
  out.times = times;
  out.positions.resize(n, model.dof());
  out.reachable.resize(poses.size());

  Eigen::VectorXd seed = settings.seed.value_or(model.mid_range());
  for (Eigen::Index i = 0; i < n; ++i) {
    const IkResult r = solve_waypoint(model, poses[i], seed, settings);
    if (i == 0 && !r.converged()) {
      throw InfeasibleGraspError("first waypoint unreachable (position error " + std::to_string(r.position_error) +
                                 " m, orientation error " + std::to_string(r.orientation_error) + " rad)");
    }
    out.positions.row(i) = r.q.transpose();
    out.reachable[i] = r.converged();
    // a failed iterate can sit anywhere; keep tracking from the last good solution
    if (r.converged()) seed = r.q;
  }
  out.velocities = differentiate(times, out.positions);
  out.accelerations = differentiate_twice(times, out.positions);
  return out;
}

}  // namespace postgrasp
