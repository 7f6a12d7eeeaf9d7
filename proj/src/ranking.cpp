#include "postgrasp/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace postgrasp {

const char* objective_name(Objective o) {
  switch (o) {
    case Objective::tov: return "TOV";
    case Objective::tme: return "TME";
    case Objective::tem: return "TEM";
  }
  return "?";
}

Sense ObjectiveSenses::operator[](Objective o) const {
  switch (o) {
    case Objective::tov: return tov;
    case Objective::tme: return tme;
    case Objective::tem: return tem;
  }
  return Sense::minimize;
}

double ObjectiveRecord::operator[](Objective o) const {
  switch (o) {
    case Objective::tov: return scalars.tov;
    case Objective::tme: return scalars.tme;
    case Objective::tem: return scalars.tem;
  }
  return 0.0;
}

std::vector<ObjectiveRecord> objective_records(const std::vector<GraspScorecard>& cards) {
  std::vector<ObjectiveRecord> out;
  out.reserve(cards.size());
  for (const GraspScorecard& c : cards) {
    out.push_back({c.grasp_id, c.feasible && c.scalars.has_value(), c.scalars.value_or(MetricScalars{})});
  }
  return out;
}

namespace {

std::vector<std::size_t> feasible_indices(const std::vector<ObjectiveRecord>& records) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].feasible) idx.push_back(i);
  }
  return idx;
}

std::array<double, 3> costs_of(const ObjectiveRecord& r, const ObjectiveSenses& senses) {
  std::array<double, 3> c{};
  for (Objective o : kObjectives) {
    const double v = r[o];
    c[static_cast<int>(o)] = senses[o] == Sense::minimize ? v : -v;
  }
  return c;
}

bool dominates(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  bool strict = false;
  for (int k = 0; k < 3; ++k) {
    if (a[k] > b[k]) return false;
    strict = strict || a[k] < b[k];
  }
  return strict;
}

}  // namespace

NormalizedScores normalize(const std::vector<ObjectiveRecord>& records) {
  const std::vector<std::size_t> feasible = feasible_indices(records);
  if (feasible.empty()) throw std::invalid_argument("cannot normalize: no feasible grasps");
  NormalizedScores out;
  out.maxima = {-INFINITY, -INFINITY, -INFINITY};
  for (std::size_t i : feasible) {
    for (Objective o : kObjectives) {
      const double v = records[i][o];
      if (!std::isfinite(v)) throw std::invalid_argument("cannot normalize non-finite " + std::string(objective_name(o)));
      out.maxima[static_cast<int>(o)] = std::max(out.maxima[static_cast<int>(o)], v);
    }
  }
  for (Objective o : kObjectives) {
    if (!(out.maxima[static_cast<int>(o)] > 0.0)) {
      throw std::invalid_argument(std::string("cannot normalize ") + objective_name(o) + ": maximum is not positive");
    }
  }
  for (const ObjectiveRecord& r : records) {
    out.ids.push_back(r.id);
    if (!r.feasible) {
      out.values.emplace_back();
      continue;
    }
    std::array<double, 3> v{};
    for (Objective o : kObjectives) v[static_cast<int>(o)] = r[o] / out.maxima[static_cast<int>(o)];
    out.values.emplace_back(v);
  }
  return out;
}

std::vector<std::size_t> non_dominated(const std::vector<std::array<double, 3>>& costs) {
  // Lexicographic order puts every dominator ahead of what it dominates, so
  // each point only has to be checked against the front found so far.
  std::vector<std::size_t> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
  std::vector<std::size_t> front;
  for (std::size_t i : order) {
    const bool dominated =
        std::any_of(front.begin(), front.end(), [&](std::size_t f) { return dominates(costs[f], costs[i]); });
    if (!dominated) front.push_back(i);
  }
  std::sort(front.begin(), front.end());
  return front;
}

std::vector<std::size_t> pareto_front(const std::vector<ObjectiveRecord>& records, const ObjectiveSenses& senses) {
  const std::vector<std::size_t> feasible = feasible_indices(records);
  std::vector<std::array<double, 3>> costs;
  costs.reserve(feasible.size());
  for (std::size_t i : feasible) costs.push_back(costs_of(records[i], senses));
  std::vector<std::size_t> front;
  for (std::size_t k : non_dominated(costs)) front.push_back(feasible[k]);
  return front;
}

ConflictReport detect_conflict(const std::vector<ObjectiveRecord>& records, const ObjectiveSenses& senses) {
  const std::vector<std::size_t> feasible = feasible_indices(records);
  if (feasible.empty()) throw std::invalid_argument("conflict detection needs a feasible grasp");
  const std::vector<std::size_t> front = pareto_front(records, senses);
  const auto on_front = [&](std::size_t i) { return std::binary_search(front.begin(), front.end(), i); };

  ConflictReport report;
  for (Objective o : kObjectives) {
    const int k = static_cast<int>(o);
    std::size_t best = feasible.front();
    double best_cost = costs_of(records[best], senses)[k];
    for (std::size_t i : feasible) {
      const double c = costs_of(records[i], senses)[k];
      const bool better = c < best_cost || (c == best_cost && on_front(i) && !on_front(best));
      if (better) {
        best = i;
        best_cost = c;
      }
    }
    report.argbest[k] = best;
  }
  report.conflict = !(report.argbest[0] == report.argbest[1] && report.argbest[1] == report.argbest[2]);
  return report;
}

ScalarizedRanking scalarize(const NormalizedScores& normalized, const std::array<double, 3>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("scalarization weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("scalarization weights must sum to 1");

  ScalarizedRanking out;
  out.weights = weights;
  std::vector<std::pair<std::size_t, double>> scored;
  for (std::size_t i = 0; i < normalized.values.size(); ++i) {
    if (!normalized.values[i]) continue;
    const auto& v = *normalized.values[i];
    scored.emplace_back(i, weights[0] * (1.0 - v[0]) + weights[1] * v[1] + weights[2] * v[2]);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  for (const auto& [i, score] : scored) {
    out.order.push_back(i);
    out.scores.push_back(score);
  }
  return out;
}

RankingReport rank(const std::vector<ObjectiveRecord>& records, const std::optional<std::array<double, 3>>& weights) {
  RankingReport report;
  report.normalized = normalize(records);
  report.pareto_indices = pareto_front(records);
  for (std::size_t i : report.pareto_indices) report.pareto.push_back(records[i].id);
  const ConflictReport conflict = detect_conflict(records);
  report.conflict = conflict.conflict;
  for (int k = 0; k < 3; ++k) report.argbest[k] = records[conflict.argbest[k]].id;
  if (weights) report.scalarized = scalarize(report.normalized, *weights);
  return report;
}

}  // namespace postgrasp
