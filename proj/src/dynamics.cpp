#include "postgrasp/dynamics.hpp"

#include <string>
#include <vector>

namespace postgrasp {

namespace {

void check_size(const ChainModel& model, const Eigen::VectorXd& v, const char* what) {
  if (v.size() != model.dof()) {
    throw std::invalid_argument(std::string(what) + " has " + std::to_string(v.size()) + " entries, model has " +
                                std::to_string(model.dof()) + " joints");
  }
}

// Body mass, world CoM and world inertia about the CoM.
struct WorldBody {
  double mass;
  Eigen::Vector3d com;
  Eigen::Matrix3d inertia;
};

WorldBody world_body(const Pose& frame, double mass, const Eigen::Vector3d& com, const Eigen::Matrix3d& inertia) {
  const Eigen::Matrix3d r = frame.rotation.matrix();
  return {mass, frame * com, r * inertia * r.transpose()};
}

std::vector<WorldBody> world_bodies(const ChainModel& model, const ChainKinematics& kin, const ToolLoad& load) {
  std::vector<WorldBody> bodies;
  bodies.reserve(model.dof() + 1);
  for (int i = 0; i < model.dof(); ++i) {
    const LinkSpec& link = model.links()[i];
    bodies.push_back(world_body(kin.link_frames[i], link.mass, link.com, link.inertia));
  }
  if (load) bodies.push_back(world_body(kin.tool, load->mass(), load->com(), load->inertia_about_com()));
  return bodies;
}

// Index of the link a body is rigidly attached to; the load rides on the last link.
int carrier(int body, int dof) { return body < dof ? body : dof - 1; }

}  // namespace

Eigen::MatrixXd mass_matrix(const ChainModel& model, const Eigen::VectorXd& q, const ToolLoad& load) {
  const ChainKinematics kin = chain_kinematics(model, q);
  const int n = model.dof();

  // composite spatial inertias about the world origin, world axes
  std::vector<Matrix6> composite(n, Matrix6::Zero());
  for (int i = 0; i < n; ++i) {
    composite[i] = transform_spatial_inertia(model.links()[i].spatial_inertia(), kin.link_frames[i]).matrix();
  }
  if (load) composite[n - 1] += transform_spatial_inertia(*load, kin.tool).matrix();
  for (int i = n - 2; i >= 0; --i) composite[i] += composite[i + 1];

  // joint motion subspaces in world Plücker coordinates (linear at origin; angular)
  Eigen::Matrix<double, 6, Eigen::Dynamic> s(6, n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& z = kin.axes[i];
    if (model.joints()[i].kind == JointKind::revolute) {
      s.col(i) << kin.anchors[i].cross(z), z;
    } else {
      s.col(i) << z, Eigen::Vector3d::Zero();
    }
  }

  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    const Vector6 force = composite[j] * s.col(j);
    for (int i = 0; i <= j; ++i) {
      m(i, j) = s.col(i).dot(force);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

Eigen::MatrixXd coriolis_matrix(const ChainModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                const ToolLoad& load, double step) {
  check_size(model, qd, "joint velocity");
  const int n = model.dof();
  std::vector<Eigen::MatrixXd> dm(n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd qp = q;
    Eigen::VectorXd qm = q;
    qp(k) += step;
    qm(k) -= step;
    dm[k] = (mass_matrix(model, qp, load) - mass_matrix(model, qm, load)) / (2.0 * step);
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += (dm[k](i, j) + dm[j](i, k) - dm[i](k, j)) * qd(k);
      c(i, j) = 0.5 * acc;
    }
  }
  return c;
}

Eigen::VectorXd gravity_vector(const ChainModel& model, const Eigen::VectorXd& q, const Eigen::Vector3d& gravity,
                               const ToolLoad& load) {
  const ChainKinematics kin = chain_kinematics(model, q);
  const int n = model.dof();
  const std::vector<WorldBody> bodies = world_bodies(model, kin, load);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (int b = 0; b < static_cast<int>(bodies.size()); ++b) {
    const Eigen::Vector3d weight = -bodies[b].mass * gravity;  // dV/dcom
    for (int i = 0; i <= carrier(b, n); ++i) {
      const Eigen::Vector3d& z = kin.axes[i];
      const Eigen::Vector3d dcom =
          model.joints()[i].kind == JointKind::revolute ? z.cross(bodies[b].com - kin.anchors[i]) : z;
      g(i) += weight.dot(dcom);
    }
  }
  return g;
}

Eigen::VectorXd inverse_dynamics(const ChainModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                 const Eigen::VectorXd& qdd, const Eigen::Vector3d& gravity, const ToolLoad& load) {
  check_size(model, qd, "joint velocity");
  check_size(model, qdd, "joint acceleration");
  const ChainKinematics kin = chain_kinematics(model, q);
  const int n = model.dof();
  const std::vector<WorldBody> bodies = world_bodies(model, kin, load);

  // forward pass: angular velocity/acceleration and link-origin acceleration
  std::vector<Eigen::Vector3d> w(n), dw(n), a(n), origin(n);
  Eigen::Vector3d w_prev = Eigen::Vector3d::Zero();
  Eigen::Vector3d dw_prev = Eigen::Vector3d::Zero();
  Eigen::Vector3d a_prev = -gravity;
  Eigen::Vector3d o_prev = model.base().translation;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& z = kin.axes[i];
    origin[i] = kin.link_frames[i].translation;
    const Eigen::Vector3d r = origin[i] - o_prev;
    a[i] = a_prev + dw_prev.cross(r) + w_prev.cross(w_prev.cross(r));
    if (model.joints()[i].kind == JointKind::revolute) {
      w[i] = w_prev + z * qd(i);
      dw[i] = dw_prev + z * qdd(i) + w_prev.cross(z * qd(i));
    } else {
      w[i] = w_prev;
      dw[i] = dw_prev;
      a[i] += 2.0 * w_prev.cross(z * qd(i)) + z * qdd(i);
    }
    w_prev = w[i];
    dw_prev = dw[i];
    a_prev = a[i];
    o_prev = origin[i];
  }

  // per-link wrench about the link origin
  std::vector<Eigen::Vector3d> force(n, Eigen::Vector3d::Zero()), moment(n, Eigen::Vector3d::Zero());
  for (int b = 0; b < static_cast<int>(bodies.size()); ++b) {
    const int i = carrier(b, n);
    const WorldBody& body = bodies[b];
    const Eigen::Vector3d c = body.com - origin[i];
    const Eigen::Vector3d ac = a[i] + dw[i].cross(c) + w[i].cross(w[i].cross(c));
    const Eigen::Vector3d f = body.mass * ac;
    force[i] += f;
    moment[i] += body.inertia * dw[i] + w[i].cross(body.inertia * w[i]) + c.cross(f);
  }

  // backward pass
  Eigen::VectorXd tau(n);
  Eigen::Vector3d f_next = Eigen::Vector3d::Zero();
  Eigen::Vector3d n_next = Eigen::Vector3d::Zero();
  for (int i = n - 1; i >= 0; --i) {
    const Eigen::Vector3d lever = i + 1 < n ? Eigen::Vector3d(origin[i + 1] - origin[i]) : Eigen::Vector3d::Zero();
    const Eigen::Vector3d f = force[i] + f_next;
    const Eigen::Vector3d m = moment[i] + n_next + lever.cross(f_next);
    const Eigen::Vector3d& z = kin.axes[i];
    tau(i) = model.joints()[i].kind == JointKind::revolute ? z.dot(m) : z.dot(f);
    f_next = f;
    n_next = m;
  }
  return tau;
}

DynamicsEvaluation evaluate_dynamics(const ChainModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                     const Eigen::Vector3d& gravity, const ToolLoad& load) {
  return {mass_matrix(model, q, load), coriolis_matrix(model, q, qd, load), gravity_vector(model, q, gravity, load)};
}

Eigen::MatrixXd augmented_mass_matrix(const ChainModel& model, const Eigen::VectorXd& q, const GraspCandidate& grasp,
                                      const SpatialInertia& object) {
  const ChainKinematics kin = chain_kinematics(model, q);
  const Jacobian j = geometric_jacobian(kin, model);
  const SpatialInertia in_gripper = object_inertia_in_gripper_frame(grasp, object);
  // the Jacobian twist is taken at the tool origin along world axes
  const Matrix6 w = transform_spatial_inertia(in_gripper, Pose::from_rotation(kin.tool.rotation)).matrix();
  Eigen::MatrixXd m = mass_matrix(model, q) + j.transpose() * w * j;
  return 0.5 * (m + m.transpose());
}

namespace {

Matrix6 inverse_inertia_through(const Jacobian& j, const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw DegenerateModelError("joint-space inertia is singular or ill-conditioned (eigenvalues " +
                               std::to_string(lo) + " .. " + std::to_string(hi) + ")");
  }
  const Eigen::MatrixXd x = m.llt().solve(j.transpose());
  Matrix6 out = j * x;
  return 0.5 * (out + out.transpose());
}

}  // namespace

Matrix6 operational_mass_inverse(const ChainModel& model, const Eigen::VectorXd& q, const GraspCandidate& grasp,
                                 const SpatialInertia& object) {
  return inverse_inertia_through(geometric_jacobian(model, q), augmented_mass_matrix(model, q, grasp, object));
}

Matrix6 operational_mass_inverse(const ChainModel& model, const Eigen::VectorXd& q, const ToolLoad& load) {
  return inverse_inertia_through(geometric_jacobian(model, q), mass_matrix(model, q, load));
}

}  // namespace postgrasp
