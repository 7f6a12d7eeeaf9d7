#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "oracles/oracles.hpp"
#include "postgrasp/chain_model.hpp"
#include "postgrasp/io.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return POSTGRASP_DATA_DIR; }

inline postgrasp::ChainModel load_data_robot(const std::string& name) {
  return postgrasp::load_robot(data_dir() / "robots" / name);
}

// Same arm as oracle::two_r_closed_form: joints about +z, tip masses.
inline postgrasp::ChainModel planar_2r(const oracle::TwoRParams& p = {}) {
  using namespace postgrasp;
  JointSpec j1, j2;
  j1.lower = j2.lower = -10.0;
  j1.upper = j2.upper = 10.0;
  j2.origin = Pose::from_translation({p.l1, 0.0, 0.0});
  LinkSpec a{p.m1, {p.l1, 0.0, 0.0}, Eigen::Matrix3d::Zero()};
  LinkSpec b{p.m2, {p.l2, 0.0, 0.0}, Eigen::Matrix3d::Zero()};
  return ChainModel("2r", Pose::identity(), {j1, j2}, {a, b}, Pose::from_translation({p.l2, 0.0, 0.0}));
}

inline postgrasp::ChainModel prismatic_slider(double link_mass) {
  using namespace postgrasp;
  JointSpec j;
  j.kind = JointKind::prismatic;
  j.axis = Eigen::Vector3d::UnitX();
  j.lower = -1.0;
  j.upper = 1.0;
  LinkSpec l{link_mass, Eigen::Vector3d::Zero(), 0.01 * Eigen::Matrix3d::Identity()};
  return ChainModel("slider", Pose::identity(), {j}, {l}, Pose::identity());
}

// Point mass m at radius l on a joint about +z; the tool sits on the mass.
inline postgrasp::ChainModel pendulum(double m, double l) {
  using namespace postgrasp;
  JointSpec j;
  LinkSpec link{m, {l, 0.0, 0.0}, Eigen::Matrix3d::Zero()};
  return ChainModel("pendulum", Pose::identity(), {j}, {link}, Pose::from_translation({l, 0.0, 0.0}));
}

inline Eigen::VectorXd uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

inline Eigen::VectorXd random_configuration(std::mt19937_64& rng, const postgrasp::ChainModel& model) {
  Eigen::VectorXd q(model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    std::uniform_real_distribution<double> d(model.joints()[i].lower, model.joints()[i].upper);
    q(i) = d(rng);
  }
  return q;
}

inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace testing
