#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "postgrasp/metrics.hpp"

namespace postgrasp {

enum class Objective { tov = 0, tme = 1, tem = 2 };
enum class Sense { maximize, minimize };

inline constexpr std::array<Objective, 3> kObjectives = {Objective::tov, Objective::tme, Objective::tem};
const char* objective_name(Objective o);

struct ObjectiveSenses {
  Sense tov = Sense::maximize;
  Sense tme = Sense::minimize;
  Sense tem = Sense::minimize;

  Sense operator[](Objective o) const;
};

/// Scalar results of one grasp, as ranked. Order in a vector is the grasp index.
struct ObjectiveRecord {
  std::string id;
  bool feasible = true;
  MetricScalars scalars;

  double operator[](Objective o) const;
};

std::vector<ObjectiveRecord> objective_records(const std::vector<GraspScorecard>& cards);

struct NormalizedScores {
  std::vector<std::string> ids;
  /// Per grasp (tov, tme, tem) divided by the feasible maxima; empty for infeasible grasps.
  std::vector<std::optional<std::array<double, 3>>> values;
  std::array<double, 3> maxima{};
};

/// Divide each objective by its maximum over feasible grasps. Throws
/// std::invalid_argument with no feasible grasp, a non-finite scalar, or a
/// non-positive maximum.
NormalizedScores normalize(const std::vector<ObjectiveRecord>& records);

/**
 * @brief Indices of the non-dominated feasible grasps, ascending.
 *
 * A grasp is dominated when another is at least as good in every objective
 * and strictly better in one. Grasps with identical scores are all kept.
 */
std::vector<std::size_t> pareto_front(const std::vector<ObjectiveRecord>& records, const ObjectiveSenses& senses = {});

/// Non-dominated subset of cost vectors (all minimized), indices ascending.
std::vector<std::size_t> non_dominated(const std::vector<std::array<double, 3>>& costs);

struct ConflictReport {
  bool conflict = false;
  /// Best grasp index per objective in (tov, tme, tem) order.
  std::array<std::size_t, 3> argbest{};
};

/// Per-objective best grasps and whether they disagree. Exact ties go to a
/// non-dominated grasp first, then to the lowest index.
ConflictReport detect_conflict(const std::vector<ObjectiveRecord>& records, const ObjectiveSenses& senses = {});

struct ScalarizedRanking {
  std::array<double, 3> weights{};
  std::vector<std::size_t> order;  ///< best first
  std::vector<double> scores;      ///< aligned with order
};

/// Orders feasible grasps by w_tov (1 - tov) + w_tme tme + w_tem tem over
/// normalized scores, ties by grasp index. Weights must be non-negative and
/// sum to 1.
ScalarizedRanking scalarize(const NormalizedScores& normalized, const std::array<double, 3>& weights);

struct RankingReport {
  std::array<std::string, 3> argbest;
  std::vector<std::string> pareto;
  std::vector<std::size_t> pareto_indices;
  bool conflict = false;
  NormalizedScores normalized;
  std::optional<ScalarizedRanking> scalarized;
};

RankingReport rank(const std::vector<ObjectiveRecord>& records,
                   const std::optional<std::array<double, 3>>& weights = std::nullopt);

}  // namespace postgrasp
