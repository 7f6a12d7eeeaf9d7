#include <cmath>
#include <random>

#include "doctest.h"
#include "postgrasp/metrics.hpp"
#include "support.hpp"

using namespace postgrasp;

namespace {

Vector6 unit(int axis) { return Vector6::Unit(axis); }

RigidObject sample_object() {
  const Eigen::Vector3d e(0.15, 0.5, 0.2);
  return {0.4, cuboid_inertia(0.4, e), e};
}

TaskTrajectory line_task(int n, double total_time) {
  std::vector<double> t;
  std::vector<Pose> p;
  for (int i = 0; i < n; ++i) {
    t.push_back(total_time * i / (n - 1));
    p.push_back(Pose::from_translation({0.6 + 0.2 * i / (n - 1), 0.3, 0.0}));
  }
  return {t, p};
}

}  // namespace

TEST_CASE("trapezoid rule") {
  Eigen::VectorXd s(3), f(3);
  s << 0.0, 0.25, 1.0;
  f << 1.0, 3.0, 5.0;
  CHECK(trapezoid(s, f) == doctest::Approx(0.25 * 2.0 + 0.75 * 4.0));
  // exact for linear integrands
  f = 2.0 * s.array() + 1.0;
  CHECK(trapezoid(s, f) == doctest::Approx(2.0));
}

TEST_CASE("directional manipulability on simple Jacobians") {
  Jacobian j = Jacobian::Zero(6, 6);
  j.diagonal() << 2.0, 1.0, 0.5, 1.0, 1.0, 1.0;
  CHECK(directional_manipulability(j, unit(0)) == doctest::Approx(4.0));
  CHECK(directional_manipulability(j, unit(2)) == doctest::Approx(0.25));
  Vector6 u = Vector6::Zero();
  u(0) = u(1) = std::sqrt(0.5);
  CHECK(directional_manipulability(j, u) == doctest::Approx(1.0 / (0.5 / 4.0 + 0.5 / 1.0)));

  // direction outside the range of J
  Jacobian planar = Jacobian::Zero(6, 2);
  planar(0, 0) = 1.0;
  planar(1, 1) = 1.0;
  CHECK(directional_manipulability(planar, unit(2)) == 0.0);
  CHECK(directional_manipulability(planar, unit(0)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(directional_manipulability(j, 2.0 * unit(0)), std::invalid_argument);
}

TEST_CASE("directional manipulability matches the eigendecomposition oracle") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 200; ++k) {
    const int n = 6 + k % 3;
    const Jacobian j = testing::uniform_vector(rng, 6 * n, -1, 1).reshaped(6, n);
    Vector6 u = testing::uniform_vector(rng, 6, -1, 1);
    u.normalize();
    const double a2 = directional_manipulability(j, u);
    CHECK(std::abs(a2 - oracle::ellipsoid_radius_squared(j, u)) <= 1e-10 * std::max(1.0, a2));
    // a u lies on the ellipsoid boundary: a^2 u^T (J J^T)^-1 u = 1
    const Eigen::MatrixXd jjt = j * j.transpose();
    CHECK(std::abs(a2 * u.dot(jjt.ldlt().solve(u)) - 1.0) < 1e-9);
  }
}

TEST_CASE("motion directions") {
  std::vector<Pose> p = {Pose::from_translation({0, 0, 0}), Pose::from_translation({0, 0, 0}),
                         Pose::from_translation({0, 0, 2}), Pose::from_translation({1, 0, 2})};
  const auto u = translation_directions(p);
  REQUIRE(u.size() == 4);
  // first segment is still: borrows the next one
  CHECK((u[0] - unit(2)).norm() == 0.0);
  CHECK((u[1] - unit(2)).norm() == 0.0);
  CHECK((u[2] - unit(0)).norm() == 0.0);
  CHECK((u[3] - unit(0)).norm() == 0.0);

  std::vector<Pose> spin = {Pose::identity(), Pose::from_rotation(Rotation::from_axis_angle(Eigen::Vector3d::UnitZ(), 0.2))};
  const auto w = twist_directions(spin);
  CHECK((w[0] - unit(5)).norm() < 1e-15);
  CHECK_THROWS_AS(translation_directions(spin), MetricError);
  CHECK_THROWS_AS(twist_directions({Pose::identity(), Pose::identity()}), MetricError);
}

TEST_CASE("effective mass anchors") {
  SUBCASE("prismatic link plus a rigidly held point load") {
    const ChainModel slider = testing::prismatic_slider(2.0);
    const SpatialInertia load = SpatialInertia::from_rigid_body(0.4, Eigen::Vector3d::Zero(), Eigen::Matrix3d::Zero());
    const EffectiveMass m = effective_mass(slider, Eigen::VectorXd::Zero(1), {"g", Pose::identity()}, load, unit(0));
    CHECK(std::abs(m.value - 2.4) < 1e-12);
    CHECK_FALSE(m.near_singular);
  }
  SUBCASE("pendulum, tangential direction") {
    const ChainModel p = testing::pendulum(1.7, 0.6);
    for (double q : {-1.0, 0.0, 0.4, 2.5}) {
      const Eigen::VectorXd qv = Eigen::VectorXd::Constant(1, q);
      const Vector6 t = (Vector6() << -std::sin(q), std::cos(q), 0, 0, 0, 0).finished();
      const EffectiveMass m = effective_mass(p, qv, {"g", Pose::identity()}, SpatialInertia::zero(), t);
      CHECK(std::abs(m.value - 1.7) < 1e-10);
    }
  }
  SUBCASE("straight 2R arm along its own length") {
    const ChainModel arm = testing::planar_2r();
    const EffectiveMass m = effective_mass(arm, Eigen::Vector2d::Zero(), {"g", Pose::identity()},
                                           SpatialInertia::zero(), unit(0));
    CHECK(m.near_singular);
    CHECK(m.value == kEffectiveMassCap);
  }
}

TEST_CASE("profiles on a tracked line") {
  const ChainModel model = testing::load_data_robot("baxter_like_7dof.json");
  const TaskTrajectory task = line_task(12, 2.0);
  const GraspCandidate grasp{"g", {Rotation(0, std::sqrt(0.5), std::sqrt(0.5), 0), {0, 0.0, 0.1}}};
  IkSettings ik;
  ik.seed = (Eigen::VectorXd(7) << 0.0, -0.55, 0.0, 1.2, 0.0, 0.9, 0.0).finished();
  const GraspScorecard card = evaluate_grasp(model, task, grasp, sample_object(), ik);
  REQUIRE(card.feasible);
  CHECK(card.joints.all_reachable());
  CHECK(card.tov_profile.values.size() == 12);
  CHECK((card.tov_profile.values.array() > 0).all());
  CHECK((card.tme_profile.values.array() > 0).all());
  CHECK((card.tem_profile.values.array() > 0).all());
  const Eigen::VectorXd s = quadrature_grid(task, Quadrature::arc_length);
  CHECK(card.tov_profile.integral == doctest::Approx(trapezoid(s, card.tov_profile.values)));
  CHECK(card.scalars->tem == card.tem_profile.integral);

  // torque weights scale the integrand joint by joint
  MetricOptions weighted;
  weighted.torque_weights = Eigen::VectorXd::Constant(7, 2.0);
  const MetricProfile tme2 = torque_effort(model, card.joints, grasp, sample_object().spatial_inertia(), s, weighted);
  CHECK(tme2.integral == doctest::Approx(2.0 * card.tme_profile.integral).epsilon(1e-12));
}

TEST_CASE("infeasible start is reported, not thrown") {
  const ChainModel model = testing::load_data_robot("baxter_like_7dof.json");
  std::vector<Pose> far = {Pose::from_translation({5, 0, 0}), Pose::from_translation({5, 1, 0})};
  const TaskTrajectory task({0.0, 1.0}, far);
  const GraspScorecard card = evaluate_grasp(model, task, {"g", Pose::identity()}, sample_object(), {});
  CHECK_FALSE(card.feasible);
  CHECK_FALSE(card.scalars.has_value());
  CHECK(card.infeasible_reason.find("first waypoint") != std::string::npos);
}

TEST_CASE("geometric metrics ignore timing, effort does not") {
  const ChainModel model = testing::load_data_robot("baxter_like_7dof.json");
  // fast enough that inertial torques are not swamped by gravity
  const TaskTrajectory task = line_task(15, 0.5);
  std::vector<double> slow;
  for (std::size_t i = 0; i < task.size(); ++i) {
    const double x = static_cast<double>(i) / (task.size() - 1);
    slow.push_back(1.0 * (x + 0.2 * x * (1 - x)));
  }
  const GraspCandidate grasp{"g", {Rotation(0, std::sqrt(0.5), std::sqrt(0.5), 0), {0, 0.1, 0.1}}};
  IkSettings ik;
  ik.seed = (Eigen::VectorXd(7) << 0.0, -0.55, 0.0, 1.2, 0.0, 0.9, 0.0).finished();
  const GraspScorecard a = evaluate_grasp(model, task, grasp, sample_object(), ik);
  const GraspScorecard b = evaluate_grasp(model, task.retimed(slow), grasp, sample_object(), ik);
  REQUIRE(a.feasible);
  REQUIRE(b.feasible);
  CHECK(std::abs(a.scalars->tov - b.scalars->tov) <= 1e-9 * a.scalars->tov);
  CHECK(std::abs(a.scalars->tem - b.scalars->tem) <= 1e-9 * a.scalars->tem);
  CHECK(std::abs(a.scalars->tme - b.scalars->tme) > 1e-3 * a.scalars->tme);
}
