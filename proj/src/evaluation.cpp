#include "postgrasp/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace postgrasp {

namespace {

using ojson = nlohmann::ordered_json;

const MetricProfile& profile_of(const GraspScorecard& card, Objective metric) {
  switch (metric) {
    case Objective::tov: return card.tov_profile;
    case Objective::tme: return card.tme_profile;
    case Objective::tem: return card.tem_profile;
  }
  return card.tov_profile;
}

int unreachable_count(const GraspScorecard& card) {
  return static_cast<int>(std::count(card.joints.reachable.begin(), card.joints.reachable.end(), false));
}

}  // namespace

bool TaskResult::any_infeasible() const {
  return std::any_of(scorecards.begin(), scorecards.end(), [](const GraspScorecard& c) { return !c.feasible; });
}

TaskResult evaluate_task(const ChainModel& model, const TaskSpec& task, const EvaluationOptions& options) {
  const TaskTrajectory trajectory = task.trajectory();
  const IkSettings ik = task.ik_settings(options.ik);
  MetricOptions metrics = options.metrics;
  metrics.gravity = task.gravity;

  const std::size_t count = task.grasps.size();
  std::vector<GraspScorecard> cards(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        cards[i] = evaluate_grasp(model, trajectory, task.grasps[i], task.object, ik, metrics);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int jobs = options.jobs > 0 ? options.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(count));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  TaskResult result{task.name, trajectory, quadrature_grid(trajectory, metrics.quadrature), metrics.quadrature,
                    std::move(cards), std::nullopt};
  const std::vector<ObjectiveRecord> records = objective_records(result.scorecards);
  if (std::any_of(records.begin(), records.end(), [](const ObjectiveRecord& r) { return r.feasible; })) {
    result.ranking = rank(records, options.weights);
  }
  return result;
}

std::string scorecards_csv(const TaskResult& result) {
  std::ostringstream out;
  out << "grasp_id,feasible,H_TOV,H_TME,H_TEM,norm_TOV,norm_TME,norm_TEM,pareto,unreachable_waypoints,"
         "near_singular_waypoints\n";
  for (std::size_t i = 0; i < result.scorecards.size(); ++i) {
    const GraspScorecard& c = result.scorecards[i];
    out << c.grasp_id << ',' << (c.feasible ? "true" : "false") << ',';
    if (c.feasible && result.ranking) {
      const auto& norm = *result.ranking->normalized.values[i];
      const auto& idx = result.ranking->pareto_indices;
      out << format_double(c.scalars->tov) << ',' << format_double(c.scalars->tme) << ','
          << format_double(c.scalars->tem) << ',' << format_double(norm[0]) << ',' << format_double(norm[1]) << ','
          << format_double(norm[2]) << ',' << (std::binary_search(idx.begin(), idx.end(), i) ? "true" : "false")
          << ',' << unreachable_count(c) << ','
          << c.tov_profile.near_singular_count() + c.tem_profile.near_singular_count() << '\n';
    } else {
      out << ",,,,,,false,,\n";
    }
  }
  return out.str();
}

std::string profile_csv(const TaskResult& result, Objective metric) {
  std::ostringstream out;
  out << "grasp_id";
  for (std::size_t k = 0; k < result.trajectory.size(); ++k) out << ",w" << k;
  out << '\n';
  for (const GraspScorecard& c : result.scorecards) {
    if (!c.feasible) continue;
    out << c.grasp_id;
    const MetricProfile& p = profile_of(c, metric);
    for (Eigen::Index k = 0; k < p.values.size(); ++k) out << ',' << format_double(p.values(k));
    out << '\n';
  }
  return out.str();
}

std::string plot_data_csv(const TaskResult& result) {
  std::ostringstream out;
  out << "grasp_id,metric,value_normalized\n";
  if (!result.ranking) return out.str();
  for (std::size_t i = 0; i < result.scorecards.size(); ++i) {
    const auto& norm = result.ranking->normalized.values[i];
    if (!norm) continue;
    for (Objective o : kObjectives) {
      out << result.scorecards[i].grasp_id << ',' << objective_name(o) << ','
          << format_double((*norm)[static_cast<int>(o)]) << '\n';
    }
  }
  return out.str();
}

std::string report_json(const RankingReport& report, const std::string& task_name, Quadrature quadrature,
                        std::size_t grasp_count) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["task"] = task_name;
  doc["quadrature"] = quadrature == Quadrature::arc_length ? "arc_length" : "index";
  doc["grasp_count"] = grasp_count;
  doc["feasible_count"] = std::count_if(report.normalized.values.begin(), report.normalized.values.end(),
                                        [](const auto& v) { return v.has_value(); });
  ojson best;
  for (Objective o : kObjectives) best[objective_name(o)] = report.argbest[static_cast<int>(o)];
  doc["argbest"] = best;
  doc["pareto_front"] = report.pareto;
  doc["conflict"] = report.conflict;
  ojson maxima;
  for (Objective o : kObjectives) maxima[objective_name(o)] = report.normalized.maxima[static_cast<int>(o)];
  doc["normalization_maxima"] = maxima;
  if (report.scalarized) {
    ojson sc;
    sc["weights"] = report.scalarized->weights;
    sc["ordering"] = ojson::array();
    for (std::size_t k = 0; k < report.scalarized->order.size(); ++k) {
      sc["ordering"].push_back({{"grasp_id", report.normalized.ids[report.scalarized->order[k]]},
                                {"score", report.scalarized->scores[k]}});
    }
    doc["scalarized"] = sc;
  }
  return doc.dump(2) + "\n";
}

void emit_plot_data(const TaskResult& result, const std::filesystem::path& dir) {
  write_file(dir / "plot_data.csv", plot_data_csv(result));
  for (Objective o : kObjectives) {
    write_file(dir / (std::string("profile_") + objective_name(o) + ".csv"), profile_csv(result, o));
  }
}

void write_task_outputs(const TaskResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": cannot create output directory: " + ec.message());
  write_file(dir / "scorecards.csv", scorecards_csv(result));
  std::ostringstream wp;
  wp << "index,time_s,s\n";
  for (std::size_t k = 0; k < result.trajectory.size(); ++k) {
    wp << k << ',' << format_double(result.trajectory.times()[k]) << ','
       << format_double(result.grid(static_cast<Eigen::Index>(k))) << '\n';
  }
  write_file(dir / "waypoints.csv", wp.str());
  emit_plot_data(result, dir);
  if (result.ranking) {
    write_file(dir / "report.json",
               report_json(*result.ranking, result.name, result.quadrature, result.scorecards.size()));
  } else {
    ojson doc;
    doc["schema_version"] = kSchemaVersion;
    doc["task"] = result.name;
    doc["grasp_count"] = result.scorecards.size();
    doc["feasible_count"] = 0;
    write_file(dir / "report.json", doc.dump(2) + "\n");
  }
}

int run_evaluation(const RunConfig& config, std::ostream& log) {
  const ChainModel model = load_robot(config.robot);
  std::optional<std::vector<GraspCandidate>> override_grasps;
  if (config.grasps_override) override_grasps = load_grasps(*config.grasps_override);

  int status = 0;
  for (const std::filesystem::path& path : config.tasks) {
    TaskSpec task = load_task(path);
    if (config.resample) {
      if (*config.resample < 2) throw std::invalid_argument("--resample must be >= 2");
      task.resample_count = *config.resample;
    }
    if (override_grasps) {
      task.grasps = *override_grasps;
      task.sweep.reset();
    }
    const TaskResult result = evaluate_task(model, task, config.options);
    write_task_outputs(result, config.out / task.name);

    log << task.name << ": " << result.scorecards.size() << " grasps";
    if (result.ranking) {
      log << ", pareto front {";
      for (std::size_t k = 0; k < result.ranking->pareto.size(); ++k) log << (k ? "," : "") << result.ranking->pareto[k];
      log << "}, conflict=" << (result.ranking->conflict ? "true" : "false");
    }
    log << '\n';
    for (const GraspScorecard& c : result.scorecards) {
      if (!c.feasible) log << "  infeasible grasp " << c.grasp_id << ": " << c.infeasible_reason << '\n';
    }
    if (result.any_infeasible() && !config.allow_infeasible) status = 3;
  }
  return status;
}

}  // namespace postgrasp
