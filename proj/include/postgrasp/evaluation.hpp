#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "postgrasp/io.hpp"
#include "postgrasp/metrics.hpp"
#include "postgrasp/ranking.hpp"

namespace postgrasp {

struct EvaluationOptions {
  MetricOptions metrics;  ///< gravity is taken from the task file
  IkSettings ik;          ///< seed and position_only are taken from the task file
  std::optional<std::array<double, 3>> weights;
  /// Worker threads across grasps; 0 picks the hardware concurrency.
  int jobs = 1;
};

struct TaskResult {
  std::string name;
  TaskTrajectory trajectory;
  Eigen::VectorXd grid;  ///< quadrature grid (s or index)
  Quadrature quadrature = Quadrature::arc_length;
  std::vector<GraspScorecard> scorecards;  ///< same order as the task's grasps
  std::optional<RankingReport> ranking;    ///< empty when no grasp is feasible
  bool any_infeasible() const;
};

/// Runs every grasp of the task. Output is independent of `jobs`.
TaskResult evaluate_task(const ChainModel& model, const TaskSpec& task, const EvaluationOptions& options);

/// scorecards.csv, profile_{TOV,TME,TEM}.csv, waypoints.csv, report.json, plot_data.csv.
void write_task_outputs(const TaskResult& result, const std::filesystem::path& dir);

/// plot_data.csv (grasp_id, metric, value_normalized) and one heatmap CSV per metric.
void emit_plot_data(const TaskResult& result, const std::filesystem::path& dir);

std::string scorecards_csv(const TaskResult& result);
std::string profile_csv(const TaskResult& result, Objective metric);
std::string plot_data_csv(const TaskResult& result);
std::string report_json(const RankingReport& report, const std::string& task_name, Quadrature quadrature,
                        std::size_t grasp_count);

struct RunConfig {
  std::filesystem::path robot;
  std::vector<std::filesystem::path> tasks;
  std::filesystem::path out;
  std::optional<int> resample;
  std::optional<std::filesystem::path> grasps_override;
  bool allow_infeasible = false;
  EvaluationOptions options;
};

/// Full protocol: one output directory per task under config.out. Returns
/// the process exit status (0 ok, 3 when a grasp is infeasible and
/// allow_infeasible is off).
int run_evaluation(const RunConfig& config, std::ostream& log);

}  // namespace postgrasp
