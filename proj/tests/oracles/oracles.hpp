#pragma once

// Reference implementations for tests. Nothing here includes or calls the
// library; only Eigen is shared.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Planar arm in the x-y plane, both joints about +z, point masses at the
// link tips, gravity of magnitude g along -y.
struct TwoRParams {
  double l1 = 1.0;
  double l2 = 1.0;
  double m1 = 1.0;
  double m2 = 1.0;
  double g = 9.81;
};

struct TwoRState {
  Eigen::Vector2d tip;       // end-effector position (x, y)
  Eigen::Matrix2d jacobian;  // d tip / dq
  Eigen::Matrix2d mass;
  Eigen::Matrix2d coriolis;  // Christoffel form, C(q, qd) qd = velocity terms
  Eigen::Vector2d gravity;
  Eigen::Vector2d torque;
};

TwoRState two_r_closed_form(const TwoRParams& p, const Eigen::Vector2d& q, const Eigen::Vector2d& qd,
                            const Eigen::Vector2d& qdd);

enum class Sense { maximize, minimize };

// O(n^2) pairwise dominance scan; returns ascending indices.
std::vector<std::size_t> brute_force_pareto(const std::vector<std::array<double, 3>>& points,
                                            const std::array<Sense, 3>& senses);

// Central differences, column by column.
Eigen::MatrixXd finite_difference_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, double h);

// Radius^2 of the ellipsoid {J x : |x| <= 1} along unit u, from the
// eigendecomposition of J J^T: (u^T (J J^T)^-1 u)^-1, or 0 if u has a
// component along an eigenvalue below 1e-12.
double ellipsoid_radius_squared(const Eigen::MatrixXd& j, const Eigen::VectorXd& u);

}  // namespace oracle
