#include <array>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "postgrasp/evaluation.hpp"

namespace pg = postgrasp;

namespace {

using ojson = nlohmann::ordered_json;

std::array<double, 3> parse_weights(const std::string& text) {
  std::array<double, 3> w{};
  std::stringstream in(text);
  std::string item;
  int k = 0;
  while (std::getline(in, item, ',')) {
    if (k == 3) throw CLI::ValidationError("--weights", "expected three comma-separated numbers");
    try {
      std::size_t used = 0;
      w[k] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--weights", "'" + item + "' is not a number");
    }
    ++k;
  }
  if (k != 3) throw CLI::ValidationError("--weights", "expected three comma-separated numbers");
  return w;
}

ojson matrix_json(const Eigen::MatrixXd& m) {
  ojson rows = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

ojson vector_json(const Eigen::VectorXd& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-grasp metric evaluation and grasp ranking"};
  app.require_subcommand(1);

  // evaluate
  pg::RunConfig run;
  std::vector<std::string> task_paths;
  std::string robot_path, out_dir = "out", weights_text, grasps_override;
  int resample = 0;
  bool index_quadrature = false, full_twist = false;
  auto* evaluate = app.add_subcommand("evaluate", "Run every task and write scorecards, profiles and reports");
  evaluate->add_option("--robot", robot_path, "Robot model JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--task", task_paths, "Task JSON (repeatable)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", out_dir, "Output directory")->capture_default_str();
  evaluate->add_option("--resample", resample, "Waypoints per task (overrides the task file)")
      ->check(CLI::Range(2, 1000000));
  evaluate->add_option("--weights", weights_text, "Scalarization weights for TOV,TME,TEM");
  evaluate->add_flag("--allow-infeasible", run.allow_infeasible, "Exit 0 even when a grasp is infeasible");
  evaluate->add_flag("--index-quadrature", index_quadrature, "Integrate over waypoint index instead of arc length");
  evaluate->add_flag("--full-twist-mass", full_twist, "Effective mass along the full twist direction");
  evaluate->add_option("--jobs", run.options.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  evaluate->add_option("--grasps-override", grasps_override, "Grasp list JSON replacing the tasks' grasps")
      ->check(CLI::ExistingFile);

  // inspect-model
  std::string inspect_robot;
  std::vector<double> inspect_q;
  auto* inspect = app.add_subcommand("inspect-model", "Print forward kinematics and Jacobian at a configuration");
  inspect->add_option("--robot", inspect_robot, "Robot model JSON")->required()->check(CLI::ExistingFile);
  inspect->add_option("--q", inspect_q, "Joint configuration (defaults to mid-range)")->delimiter(',');

  // metrics-at
  std::string at_robot, at_task, at_grasp;
  std::size_t at_waypoint = 0;
  auto* metrics_at = app.add_subcommand("metrics-at", "Print the three metric integrands at one waypoint");
  metrics_at->add_option("--robot", at_robot, "Robot model JSON")->required()->check(CLI::ExistingFile);
  metrics_at->add_option("--task", at_task, "Task JSON")->required()->check(CLI::ExistingFile);
  metrics_at->add_option("--grasp", at_grasp, "Grasp id")->required();
  metrics_at->add_option("--waypoint", at_waypoint, "Waypoint index")->required();
  metrics_at->add_flag("--index-quadrature", index_quadrature, "Integrate over waypoint index");

  // pareto
  std::string pareto_csv, pareto_weights;
  auto* pareto = app.add_subcommand("pareto", "Re-rank an existing scorecards.csv");
  pareto->add_option("--scorecards", pareto_csv, "scorecards.csv from evaluate")->required()->check(CLI::ExistingFile);
  pareto->add_option("--weights", pareto_weights, "Scalarization weights for TOV,TME,TEM");

  try {
    app.parse(argc, argv);
    if (*evaluate) {
      run.robot = robot_path;
      run.tasks.assign(task_paths.begin(), task_paths.end());
      run.out = out_dir;
      if (resample) run.resample = resample;
      if (!grasps_override.empty()) run.grasps_override = grasps_override;
      if (!weights_text.empty()) run.options.weights = parse_weights(weights_text);
      if (index_quadrature) run.options.metrics.quadrature = pg::Quadrature::index;
      if (full_twist) run.options.metrics.mass_direction = pg::MassDirection::full_twist;
      if (run.options.jobs < 0) throw CLI::ValidationError("--jobs", "must be >= 0");
      return pg::run_evaluation(run, std::cout);
    }

    if (*inspect) {
      const pg::ChainModel model = pg::load_robot(inspect_robot);
      const Eigen::VectorXd q = inspect_q.empty() ? model.mid_range() : to_vector(inspect_q);
      const pg::Pose tool = pg::forward_kinematics(model, q);
      const Eigen::Quaterniond& r = tool.rotation.quaternion();
      ojson doc;
      doc["name"] = model.name();
      doc["dof"] = model.dof();
      doc["q"] = vector_json(q);
      doc["tool"] = {{"translation", vector_json(tool.translation)}, {"quaternion", {r.w(), r.x(), r.y(), r.z()}}};
      doc["jacobian"] = matrix_json(pg::geometric_jacobian(model, q));
      doc["mass_matrix"] = matrix_json(pg::mass_matrix(model, q));
      doc["gravity_torque"] = vector_json(pg::gravity_vector(model, q));
      std::cout << doc.dump(2) << '\n';
      return 0;
    }

    if (*metrics_at) {
      const pg::ChainModel model = pg::load_robot(at_robot);
      const pg::TaskSpec task = pg::load_task(at_task);
      const pg::TaskTrajectory trajectory = task.trajectory();
      if (at_waypoint >= trajectory.size()) {
        throw CLI::ValidationError("--waypoint", "task has " + std::to_string(trajectory.size()) + " waypoints");
      }
      const pg::GraspCandidate* grasp = nullptr;
      for (const pg::GraspCandidate& g : task.grasps) {
        if (g.id == at_grasp) grasp = &g;
      }
      if (!grasp) throw CLI::ValidationError("--grasp", "no grasp '" + at_grasp + "' in " + at_task);
      const pg::IkSettings ik = task.ik_settings({});
      pg::MetricOptions options;
      options.gravity = task.gravity;
      if (index_quadrature) options.quadrature = pg::Quadrature::index;
      const pg::GraspScorecard card = pg::evaluate_grasp(model, trajectory, *grasp, task.object, ik, options);
      ojson doc;
      doc["grasp"] = at_grasp;
      doc["waypoint"] = at_waypoint;
      doc["feasible"] = card.feasible;
      if (card.feasible) {
        const auto k = static_cast<Eigen::Index>(at_waypoint);
        doc["time_s"] = trajectory.times()[at_waypoint];
        doc["q"] = vector_json(card.joints.positions.row(k).transpose());
        doc["reachable"] = static_cast<bool>(card.joints.reachable[at_waypoint]);
        doc["TOV"] = card.tov_profile.values(k);
        doc["TME"] = card.tme_profile.values(k);
        doc["TEM"] = card.tem_profile.values(k);
        doc["TEM_near_singular"] = static_cast<bool>(card.tem_profile.near_singular[at_waypoint]);
      } else {
        doc["reason"] = card.infeasible_reason;
      }
      std::cout << doc.dump(2) << '\n';
      return card.feasible ? 0 : 3;
    }

    if (*pareto) {
      const auto records = pg::parse_scorecards_csv(pg::read_file(pareto_csv), pareto_csv);
      std::optional<std::array<double, 3>> weights;
      if (!pareto_weights.empty()) weights = parse_weights(pareto_weights);
      const pg::RankingReport report = pg::rank(records, weights);
      std::cout << pg::report_json(report, pareto_csv, pg::Quadrature::arc_length, records.size());
      return 0;
    }
  } catch (const CLI::Error& e) {
    // help and version exit 0; every usage error is 2, like other failures
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
