#include <cmath>
#include <random>

#include "doctest.h"
#include "postgrasp/chain_model.hpp"
#include "support.hpp"

using namespace postgrasp;

TEST_CASE("2R forward kinematics and Jacobian against the closed form") {
  const oracle::TwoRParams p{0.7, 0.4, 1.0, 1.0, 9.81};
  const ChainModel model = testing::planar_2r(p);
  CHECK((forward_kinematics(model, Eigen::Vector2d::Zero()).translation - Eigen::Vector3d(1.1, 0, 0)).norm() < 1e-15);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector2d q = testing::uniform_vector(rng, 2, -3, 3);
    const auto ref = oracle::two_r_closed_form(p, q, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero());
    const Pose tool = forward_kinematics(model, q);
    CHECK((tool.translation.head<2>() - ref.tip).norm() < 1e-14);
    CHECK(std::abs(tool.translation.z()) < 1e-15);
    const Jacobian j = geometric_jacobian(model, q);
    CHECK((j.block(0, 0, 2, 2) - ref.jacobian).norm() < 1e-14);
    // planar: no z velocity, rotation about z only
    CHECK(j.row(2).norm() == 0.0);
    CHECK((j.bottomRows<3>() - (Eigen::Matrix<double, 3, 2>() << 0, 0, 0, 0, 1, 1).finished()).norm() == 0.0);
  }
}

TEST_CASE("Jacobian matches finite differences on the 7-DOF arm") {
  const ChainModel model = testing::load_data_robot("baxter_like_7dof.json");
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd q = testing::random_configuration(rng, model);
    const Pose base = forward_kinematics(model, q);
    // position rows from FK, rotation rows via the log of the relative rotation
    const auto f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const Pose t = forward_kinematics(model, x);
      Eigen::VectorXd out(6);
      out << t.translation, (t.rotation * base.rotation.inverse()).log();
      return out;
    };
    const Eigen::MatrixXd fd = oracle::finite_difference_jacobian(f, q, 1e-6);
    CHECK(testing::relative_error(geometric_jacobian(model, q), fd) < 1e-8);
  }
}

TEST_CASE("prismatic columns") {
  const ChainModel model = testing::prismatic_slider(2.0);
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(1, 0.25);
  CHECK((forward_kinematics(model, q).translation - Eigen::Vector3d(0.25, 0, 0)).norm() == 0.0);
  const Jacobian j = geometric_jacobian(model, q);
  CHECK((j.col(0) - (Vector6() << 1, 0, 0, 0, 0, 0).finished()).norm() == 0.0);
}

TEST_CASE("base and tool transforms compose") {
  const ChainModel model = testing::load_data_robot("baxter_like_7dof.json");
  const Eigen::VectorXd q = model.mid_range();
  const Pose shift{Rotation::from_axis_angle(Eigen::Vector3d::UnitZ(), 0.4), Eigen::Vector3d(1, 2, 3)};
  const Pose a = forward_kinematics(model.with_base(shift * model.base()), q);
  const Pose b = shift * forward_kinematics(model, q);
  CHECK((a.translation - b.translation).norm() < 1e-12);
  const Pose tcp = Pose::from_translation({0, 0, 0.1});
  const Pose c = forward_kinematics(model.with_tool(model.tool() * tcp), q);
  CHECK((c.translation - forward_kinematics(model, q) * Eigen::Vector3d(0, 0, 0.1)).norm() < 1e-12);
}

TEST_CASE("model validation names the offending element") {
  JointSpec j;
  LinkSpec l{1.0, Eigen::Vector3d::Zero(), 0.01 * Eigen::Matrix3d::Identity()};
  const auto build = [&](JointSpec jj, LinkSpec ll) {
    return ChainModel("m", Pose::identity(), {JointSpec{}, jj}, {l, ll}, Pose::identity());
  };
  auto message = [&](JointSpec jj, LinkSpec ll) -> std::string {
    try {
      build(jj, ll);
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
    return "";
  };
  LinkSpec negative = l;
  negative.mass = -1.0;
  CHECK(message(j, negative).find("links[1].mass") != std::string::npos);

  LinkSpec triangle = l;
  triangle.inertia = Eigen::Vector3d(0.01, 0.01, 0.05).asDiagonal();
  CHECK(message(j, triangle).find("links[1].inertia") != std::string::npos);

  LinkSpec indefinite = l;
  indefinite.inertia(0, 0) = -0.01;
  CHECK(message(j, indefinite).find("links[1].inertia") != std::string::npos);

  JointSpec axis = j;
  axis.axis = Eigen::Vector3d(1, 1, 0);
  CHECK(message(axis, l).find("joints[1].axis") != std::string::npos);

  JointSpec limits = j;
  limits.lower = 1.0;
  limits.upper = -1.0;
  CHECK(message(limits, l).find("joints[1].limits") != std::string::npos);

  CHECK_THROWS_AS(ChainModel("m", Pose::identity(), {j}, {l, l}, Pose::identity()), std::invalid_argument);
  CHECK_THROWS_AS(ChainModel("m", Pose::identity(), {}, {}, Pose::identity()), std::invalid_argument);
  CHECK_NOTHROW(build(j, l));
}

TEST_CASE("configuration size is checked") {
  const ChainModel model = testing::planar_2r();
  CHECK_THROWS_AS(forward_kinematics(model, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("shipped 7-DOF arm matches its file") {
  const ChainModel model = testing::load_data_robot("baxter_like_7dof.json");
  CHECK(model.dof() == 7);
  CHECK(model.links()[0].mass == doctest::Approx(5.70044));
  CHECK(model.joints()[3].lower == doctest::Approx(-0.05));
  CHECK(model.joints()[3].upper == doctest::Approx(2.618));
  double total = 0.0;
  for (const LinkSpec& l : model.links()) total += l.mass;
  CHECK(total == doctest::Approx(5.70044 + 3.22698 + 4.31272 + 2.07206 + 2.24665 + 1.60979 + 0.85093));
  // upper-arm and forearm offsets along the joint origins
  CHECK(model.joints()[3].origin.translation.z() == doctest::Approx(0.26242));
  CHECK(model.joints()[5].origin.translation.z() == doctest::Approx(0.2707));
}
