#include <cmath>
#include <random>

#include "doctest.h"
#include "postgrasp/dynamics.hpp"
#include "support.hpp"

using namespace postgrasp;

namespace {

const Eigen::Vector3d kPlanarGravity(0.0, -9.81, 0.0);

ChainModel baxter() { return testing::load_data_robot("baxter_like_7dof.json"); }

SpatialInertia sample_load() {
  return SpatialInertia::from_rigid_body(0.4, {0.02, -0.01, 0.1}, Eigen::Vector3d(0.0097, 0.0021, 0.0091).asDiagonal());
}

}  // namespace

TEST_CASE("2R dynamics against the closed form") {
  const oracle::TwoRParams p{0.8, 0.5, 1.3, 0.6, 9.81};
  const ChainModel model = testing::planar_2r(p);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector2d q = testing::uniform_vector(rng, 2, -3, 3);
    const Eigen::Vector2d qd = testing::uniform_vector(rng, 2, -2, 2);
    const Eigen::Vector2d qdd = testing::uniform_vector(rng, 2, -2, 2);
    const auto ref = oracle::two_r_closed_form(p, q, qd, qdd);
    CHECK(testing::relative_error(mass_matrix(model, q), ref.mass) < 1e-12);
    CHECK(testing::relative_error(gravity_vector(model, q, kPlanarGravity), ref.gravity) < 1e-12);
    CHECK(testing::relative_error(coriolis_matrix(model, q, qd), ref.coriolis) < 1e-6);
    CHECK(testing::relative_error(inverse_dynamics(model, q, qd, qdd, kPlanarGravity), ref.torque) < 1e-12);
  }
}

TEST_CASE("static hold torque equals the gravity vector") {
  const ChainModel model = baxter();
  std::mt19937_64 rng(4);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(7);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd q = testing::random_configuration(rng, model);
    CHECK(testing::relative_error(inverse_dynamics(model, q, zero, zero), gravity_vector(model, q)) < 1e-10);
    const ToolLoad load = sample_load();
    CHECK(testing::relative_error(inverse_dynamics(model, q, zero, zero, standard_gravity(), load),
                                  gravity_vector(model, q, standard_gravity(), load)) < 1e-10);
  }
}

TEST_CASE("mass matrix structure on the 7-DOF arm") {
  const ChainModel model = baxter();
  std::mt19937_64 rng(5);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(7);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd q = testing::random_configuration(rng, model);
    const Eigen::VectorXd qd = testing::uniform_vector(rng, 7, -1, 1);
    const Eigen::MatrixXd m = mass_matrix(model, q);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff() > 0.0);

    // columns of M from RNEA with unit accelerations and no gravity or velocity
    Eigen::MatrixXd cols(7, 7);
    for (int i = 0; i < 7; ++i) {
      cols.col(i) = inverse_dynamics(model, q, zero, Eigen::VectorXd::Unit(7, i), Eigen::Vector3d::Zero());
    }
    CHECK((cols - m).cwiseAbs().maxCoeff() < 1e-9);

    // C qd from RNEA
    const Eigen::VectorXd bias = inverse_dynamics(model, q, qd, zero, Eigen::Vector3d::Zero());
    CHECK(testing::relative_error(coriolis_matrix(model, q, qd) * qd, bias) < 1e-6);

    // Mdot - 2C skew-symmetric, Mdot by central differences along qd
    const double h = 1e-6;
    const Eigen::MatrixXd mdot = (mass_matrix(model, q + h * qd) - mass_matrix(model, q - h * qd)) / (2 * h);
    const Eigen::MatrixXd s = mdot - 2.0 * coriolis_matrix(model, q, qd);
    CHECK((s + s.transpose()).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("load on the tool equals the augmented mass matrix") {
  const ChainModel model = baxter();
  std::mt19937_64 rng(6);
  const RigidObject object{0.4, cuboid_inertia(0.4, {0.15, 0.5, 0.2}), {0.15, 0.5, 0.2}};
  const GraspCandidate grasp{"g", {Rotation(0.0, std::sqrt(0.5), std::sqrt(0.5), 0.0), {0.0, 0.1, 0.1}}};
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd q = testing::random_configuration(rng, model);
    const SpatialInertia gmo = object_inertia_in_gripper_frame(grasp, object.spatial_inertia());
    const Eigen::MatrixXd with_load = mass_matrix(model, q, gmo);
    CHECK(testing::relative_error(with_load, augmented_mass_matrix(model, q, grasp, object.spatial_inertia())) < 1e-12);

    // the load's gravity torque is J^T of its weight at its CoM
    const Pose tool = forward_kinematics(model, q);
    const Jacobian j = geometric_jacobian(model, q);
    const Eigen::Vector3d r = tool.rotation * gmo.com();
    Vector6 wrench;
    const Eigen::Vector3d f = -0.4 * standard_gravity();
    wrench << f, r.cross(f);
    const Eigen::VectorXd delta = gravity_vector(model, q, standard_gravity(), gmo) - gravity_vector(model, q);
    CHECK(testing::relative_error(delta, j.transpose() * wrench) < 1e-10);
  }
}

TEST_CASE("operational mass of a point on the slider") {
  const ChainModel model = testing::prismatic_slider(2.0);
  const Eigen::VectorXd q = Eigen::VectorXd::Zero(1);
  const SpatialInertia obj = SpatialInertia::from_rigid_body(0.4, Eigen::Vector3d::Zero(), Eigen::Matrix3d::Zero());
  const Matrix6 inv = operational_mass_inverse(model, q, obj);
  CHECK(inv(0, 0) == doctest::Approx(1.0 / 2.4).epsilon(1e-14));
  CHECK(inv.bottomRows<5>().norm() == 0.0);
}

TEST_CASE("ill-conditioned joint inertia is rejected") {
  JointSpec a, b;
  b.origin = Pose::from_translation({1.0, 0.0, 0.0});
  // second link carries nothing: its joint sees no inertia at all
  const ChainModel model("degenerate", Pose::identity(), {a, b},
                         {LinkSpec{1.0, {1.0, 0, 0}, Eigen::Matrix3d::Zero()}, LinkSpec{}}, Pose::identity());
  CHECK_THROWS_AS(operational_mass_inverse(model, Eigen::Vector2d::Zero(), std::nullopt), DegenerateModelError);
}

TEST_CASE("gravity only enters through N") {
  const ChainModel model = baxter();
  std::mt19937_64 rng(8);
  const Eigen::VectorXd q = testing::random_configuration(rng, model);
  const Eigen::VectorXd qd = testing::uniform_vector(rng, 7, -1, 1);
  const Eigen::VectorXd qdd = testing::uniform_vector(rng, 7, -1, 1);
  const DynamicsEvaluation dyn = evaluate_dynamics(model, q, qd);
  const Eigen::VectorXd tau = dyn.mass * qdd + dyn.coriolis * qd + dyn.gravity;
  CHECK(testing::relative_error(tau, inverse_dynamics(model, q, qd, qdd)) < 1e-7);
}
