#pragma once

// Turns a demand trajectory into a policy timetable: per-step optima, the
// pointwise cheapest policy, run merging, cumulative costs and savings.

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "corridor/optimizer.hpp"
#include "corridor/stochastic.hpp"

namespace corridor {

/// Policy optima memoized by demand rounded to 1 pax/hr/mi. One cache may be
/// shared by many trajectories of the same scenario.
class OptimumCache {
 public:
  explicit OptimumCache(Scenario scenario) : scenario_(std::move(scenario)) {}

  const Scenario& scenario() const noexcept { return scenario_; }

  static double bucket(double q0) { return std::max(1.0, std::round(q0)); }

  const PolicyOptimum& get(Policy p, double q0) {
    const double b = bucket(q0);
    const auto key = std::make_pair(index_of(p), static_cast<long>(b));
    auto it = store_.find(key);
    if (it == store_.end()) it = store_.emplace(key, optimize_policy(scenario_, p, b)).first;
    return it->second;
  }

  std::size_t size() const noexcept { return store_.size(); }

 private:
  Scenario scenario_;
  std::map<std::pair<std::size_t, long>, PolicyOptimum> store_;
};

struct StepRecord {
  double t_hours = 0.0;
  double q0 = 0.0;
  double bucket_q0 = 0.0;
  /// $/hr per policy, NaN for policies outside the allowed set.
  std::array<double, 3> total{};
  Policy best = Policy::mtp;
};

struct StepTable {
  double t0_clock = SimulationDefaults::start_clock;
  double dt = SimulationDefaults::step_hours;
  std::vector<Policy> allowed;
  std::vector<StepRecord> steps;
  double max_quantization = 0.0;  ///< largest |q0 - bucket| used, pax/hr/mi
};

namespace detail {

inline std::vector<Policy> ordered_allowed(const std::vector<Policy>& allowed) {
  std::vector<Policy> out;
  for (Policy p : kAllPolicies) {
    for (Policy a : allowed) {
      if (a == p) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

inline StepTable evaluate_trajectory(OptimumCache& cache, const Trajectory& traj,
                                     const std::vector<Policy>& allowed) {
  if (allowed.empty()) throw ValidationError("allowed", "need at least one policy");
  if (traj.values.empty()) throw ValidationError("trajectory", "trajectory has no samples");
  StepTable table;
  table.t0_clock = traj.t0_clock;
  table.dt = traj.dt;
  table.allowed = detail::ordered_allowed(allowed);
  table.steps.reserve(traj.values.size());
  for (std::size_t k = 0; k < traj.values.size(); ++k) {
    StepRecord rec;
    rec.t_hours = traj.t_hours(k);
    rec.q0 = traj.values[k];
    rec.bucket_q0 = OptimumCache::bucket(rec.q0);
    table.max_quantization = std::max(table.max_quantization, std::abs(rec.q0 - rec.bucket_q0));
    rec.total.fill(std::numeric_limits<double>::quiet_NaN());
    std::optional<Policy> best;
    for (Policy p : table.allowed) {
      rec.total[index_of(p)] = cache.get(p, rec.q0).breakdown.total;
      if (!best || rec.total[index_of(p)] < rec.total[index_of(*best)]) best = p;
    }
    rec.best = *best;
    table.steps.push_back(rec);
  }
  return table;
}

inline StepTable evaluate_trajectory(const Scenario& s, const Trajectory& traj,
                                     const std::vector<Policy>& allowed) {
  OptimumCache cache(s);
  return evaluate_trajectory(cache, traj, allowed);
}

struct ScheduleEntry {
  double t_entry = 0.0;  ///< clock hours
  double t_exit = 0.0;
  Policy policy = Policy::mtp;
  double cost = 0.0;  ///< $ accrued inside the entry
};

struct Schedule {
  std::vector<Policy> allowed;
  std::vector<ScheduleEntry> entries;
  std::map<Policy, double> per_policy_cumulative;  ///< W_p, $
  double combined_cumulative = 0.0;                ///< W, $
  std::map<Policy, double> savings_vs;             ///< (W_p - W) / W_p
  double dt = 0.0;
};

namespace detail {

struct Run {
  std::size_t begin;
  std::size_t end;  // exclusive
  Policy policy;
};

inline std::vector<Run> runs_of(const std::vector<Policy>& assigned) {
  std::vector<Run> runs;
  for (std::size_t k = 0; k < assigned.size(); ++k) {
    if (runs.empty() || runs.back().policy != assigned[k]) {
      runs.push_back({k, k + 1, assigned[k]});
    } else {
      runs.back().end = k + 1;
    }
  }
  return runs;
}

}  // namespace detail

inline std::map<Policy, double> savings_report(const Schedule& schedule) {
  std::map<Policy, double> out;
  for (const auto& [p, w] : schedule.per_policy_cumulative) {
    if (!(w > 0.0)) throw Error("single-policy cumulative cost must be positive");
    out[p] = (w - schedule.combined_cumulative) / w;
  }
  return out;
}

/// Each sample governs the interval up to the next one, so a trajectory of
/// n samples yields n - 1 intervals (a single sample governs one step).
/// Runs shorter than `min_dwell_minutes` fold into the cheaper neighbour.
inline Schedule build_schedule(const StepTable& table, double min_dwell_minutes = 0.0) {
  if (table.steps.empty()) throw ValidationError("steps", "step table is empty");
  if (!(min_dwell_minutes >= 0.0)) throw ValidationError("min_dwell", "must be >= 0");
  const std::size_t n = table.steps.size() > 1 ? table.steps.size() - 1 : 1;
  const double dt = table.dt;

  std::vector<Policy> assigned(n);
  for (std::size_t k = 0; k < n; ++k) assigned[k] = table.steps[k].best;

  auto run_cost = [&](const detail::Run& r, Policy p) {
    double c = 0.0;
    for (std::size_t k = r.begin; k < r.end; ++k) c += table.steps[k].total[index_of(p)] * dt;
    return c;
  };

  const double dwell_steps = min_dwell_minutes / 60.0 / dt;
  while (min_dwell_minutes > 0.0) {
    const auto runs = detail::runs_of(assigned);
    if (runs.size() < 2) break;
    std::optional<std::size_t> shortest;
    for (std::size_t j = 0; j < runs.size(); ++j) {
      const auto len = static_cast<double>(runs[j].end - runs[j].begin);
      if (len + 1e-9 >= dwell_steps) continue;
      if (!shortest || runs[j].end - runs[j].begin < runs[*shortest].end - runs[*shortest].begin) {
        shortest = j;
      }
    }
    if (!shortest) break;
    const auto& r = runs[*shortest];
    Policy target;
    if (*shortest == 0) {
      target = runs[1].policy;
    } else if (*shortest + 1 == runs.size()) {
      target = runs[*shortest - 1].policy;
    } else {
      const Policy left = runs[*shortest - 1].policy;
      const Policy right = runs[*shortest + 1].policy;
      target = run_cost(r, right) < run_cost(r, left) ? right : left;
    }
    for (std::size_t k = r.begin; k < r.end; ++k) assigned[k] = target;
  }

  Schedule out;
  out.allowed = table.allowed;
  out.dt = dt;
  for (const auto& r : detail::runs_of(assigned)) {
    ScheduleEntry e;
    e.t_entry = table.t0_clock + static_cast<double>(r.begin) * dt;
    e.t_exit = table.t0_clock + static_cast<double>(r.end) * dt;
    e.policy = r.policy;
    e.cost = run_cost(r, r.policy);
    out.combined_cumulative += e.cost;
    out.entries.push_back(e);
  }
  for (Policy p : table.allowed) {
    double w = 0.0;
    for (std::size_t k = 0; k < n; ++k) w += table.steps[k].total[index_of(p)] * dt;
    out.per_policy_cumulative[p] = w;
  }
  out.savings_vs = savings_report(out);
  return out;
}

}  // namespace corridor
