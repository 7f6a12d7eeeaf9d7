#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "postgrasp/chain_model.hpp"
#include "postgrasp/differential_ik.hpp"
#include "postgrasp/grasp_task.hpp"
#include "postgrasp/ranking.hpp"

namespace postgrasp {

inline constexpr int kSchemaVersion = 1;

/// Malformed or invalid input file. The message names the file and the
/// offending field path (or line/column for syntax errors).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ChainModel parse_robot(std::string_view text, const std::string& source = "<robot>");
ChainModel load_robot(const std::filesystem::path& path);
/// Canonical JSON; parse_robot(robot_to_json(m)) reproduces m exactly.
std::string robot_to_json(const ChainModel& model);

struct GraspSweep {
  Pose start;
  Pose end;
  int count = 10;
};

/// Contents of a task file.
struct TaskSpec {
  std::string name;
  std::string description;
  double total_time = 5.0;
  Eigen::Vector3d gravity = Eigen::Vector3d(0.0, 0.0, -9.81);
  RigidObject object;
  std::vector<double> keyframe_times;
  std::vector<Pose> keyframe_poses;
  /// Explicit grasp list; when the file gives a sweep this holds its expansion.
  std::vector<GraspCandidate> grasps;
  std::optional<GraspSweep> sweep;
  int resample_count = 50;
  std::optional<Eigen::VectorXd> ik_seed;
  bool position_only = false;
  std::optional<double> centering_gain;

  /// `base` with this task's seed, position_only and centering gain applied.
  IkSettings ik_settings(IkSettings base) const;

  TaskTrajectory keyframes() const { return {keyframe_times, keyframe_poses}; }
  /// Keyframes densified to resample_count waypoints.
  TaskTrajectory trajectory() const { return resample(keyframes(), resample_count); }
};

TaskSpec parse_task(std::string_view text, const std::string& source = "<task>");
TaskSpec load_task(const std::filesystem::path& path);
std::string task_to_json(const TaskSpec& task);

/// {"schema_version": 1, "grasps": [...]}
std::vector<GraspCandidate> parse_grasps(std::string_view text, const std::string& source = "<grasps>");
std::vector<GraspCandidate> load_grasps(const std::filesystem::path& path);

/// Full-precision decimal (17 significant digits).
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Throws std::runtime_error when the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Parses the scalar columns of a scorecards.csv written by `evaluate`.
std::vector<ObjectiveRecord> parse_scorecards_csv(std::string_view text, const std::string& source = "<csv>");

}  // namespace postgrasp
