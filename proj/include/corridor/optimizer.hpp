#pragma once

// Nested search for one policy: bus frequency under the capacity constraint
// inside, mode split outside, plus stationarity and equilibrium diagnostics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "corridor/cost_model.hpp"
#include "corridor/numeric.hpp"
#include "corridor/scenario.hpp"

namespace corridor {

/// Smallest frequency whose seats cover the peak load at the CBD, buses/hr.
inline double min_frequency(const Scenario& s, double q0, double auto_share) {
  return (1.0 - auto_share) * q0 * s.geometry.length / (2.0 * s.bus.capacity);
}

/// Upper end of the frequency search at demand q0.
inline double frequency_cap(const Scenario& s, double q0) {
  double cap = s.solver.frequency_cap;
  if (s.solver.frequency_cap_follows_demand) {
    cap = std::max(cap, std::ceil(min_frequency(s, q0, 0.0) - 1e-9));
  }
  return cap;
}

struct FrequencyOptimum {
  double frequency = 0.0;
  double cost = 0.0;
  double lower_bound = 0.0;  ///< max(1, ceil(min_frequency))
  double upper_bound = 0.0;
  int evaluations = 0;
};

/// Inner search over an arbitrary cost of F. Exposed so the search itself
/// can be exercised with synthetic costs.
template <class CostOfF>
FrequencyOptimum optimize_frequency_with(const SolverSettings& solver, double required,
                                         double cap, CostOfF&& cost) {
  FrequencyOptimum out;
  out.lower_bound = std::max(1.0, std::ceil(required - 1e-9));
  out.upper_bound = cap;
  if (out.lower_bound > cap) {
    throw InfeasibleError("capacity constraint needs at least " + std::to_string(required) +
                          " buses/hr but the frequency cap is " + std::to_string(cap));
  }
  if (out.lower_bound == cap) {
    out.frequency = cap;
    out.cost = cost(cap);
    out.evaluations = 1;
    return out;
  }
  GridSearch search;
  search.coarse_step = solver.frequency_step;
  search.refine_factor = solver.frequency_refine_factor;
  search.rounds = solver.frequency_rounds;
  search.patience = solver.frequency_patience;
  const GridMinResult r = grid_min(cost, out.lower_bound, cap, search);
  out.frequency = r.argmin;
  out.cost = r.min;
  out.evaluations = r.evaluations;
  return out;
}

inline FrequencyOptimum optimize_frequency(const Scenario& s, Policy policy, double q0,
                                           double auto_share) {
  const CorridorGrid grid(s.geometry.length, s.solver.grid_cells);
  return optimize_frequency_with(
      s.solver, min_frequency(s, q0, auto_share), frequency_cap(s, q0), [&](double f) {
        return PolicyEvaluation(s, policy, q0, auto_share, f, grid).breakdown().total;
      });
}

template <class G>
double central_difference(G&& g, double x, double step) {
  return (g(x + step) - g(x - step)) / (2.0 * step);
}

/// Central difference of the total cost in F, $ per (bus/hr).
inline double foc_residual(const Scenario& s, Policy policy, double q0, double auto_share,
                           double frequency, double step = 0.01) {
  return central_difference(
      [&](double f) { return cost_breakdown(s, policy, q0, auto_share, f).total; }, frequency,
      step);
}

struct EquilibriumGap {
  bool applicable = false;  ///< false when one mode carries nobody
  double signed_gap = 0.0;  ///< demand-weighted mean of U_a - U_b, $
  double abs_gap = 0.0;     ///< demand-weighted mean of |U_a - U_b|, $
};

namespace detail {

inline EquilibriumGap disutility_gap(const PolicyEvaluation& ev) {
  const auto& ua = ev.auto_disutility_profile();
  const auto& ub = ev.bus_disutility_profile();
  const CorridorGrid& grid = ev.grid();
  const double A = grid.length();
  std::vector<double> diff(grid.size());
  std::vector<double> absdiff(grid.size());
  std::vector<double> weight(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    weight[k] = 1.0 - grid.node(k) / A;
    diff[k] = (ua[k] - ub[k]) * weight[k];
    absdiff[k] = std::abs(ua[k] - ub[k]) * weight[k];
  }
  const double h = grid.step();
  const double norm = simpson(weight, h);
  EquilibriumGap g;
  g.applicable = true;
  g.signed_gap = simpson(diff, h) / norm;
  g.abs_gap = simpson(absdiff, h) / norm;
  return g;
}

}  // namespace detail

inline EquilibriumGap equilibrium_gap(const Scenario& s, Policy policy, double q0,
                                      double auto_share, double frequency) {
  if (!(auto_share > 0.0 && auto_share < 1.0) || !(q0 > 0.0)) return {};
  return detail::disutility_gap(PolicyEvaluation(s, policy, q0, auto_share, frequency));
}

struct PolicyOptimum {
  Policy policy = Policy::mtp;
  double q0 = 0.0;
  double R_star = 1.0;
  double F_star = 1.0;
  CostBreakdown breakdown;
  double foc_residual = 0.0;
  EquilibriumGap equilibrium_gap;
  bool constraint_binding = false;  ///< F_star sits on the lower end of its feasible range
  bool at_frequency_cap = false;
  double min_frequency = 0.0;
  int evaluations = 0;
};

namespace detail {

inline void finish_optimum(const Scenario& s, PolicyOptimum& opt, const FrequencyOptimum& inner) {
  opt.F_star = inner.frequency;
  opt.min_frequency = min_frequency(s, opt.q0, opt.R_star);
  opt.breakdown = cost_breakdown(s, opt.policy, opt.q0, opt.R_star, opt.F_star);
  const double eps = 1e-9 * std::max(1.0, inner.upper_bound);
  opt.constraint_binding = opt.F_star <= inner.lower_bound + eps;
  opt.at_frequency_cap = opt.F_star >= inner.upper_bound - eps;
  if (opt.F_star - 0.01 > 0.0) {
    opt.foc_residual = foc_residual(s, opt.policy, opt.q0, opt.R_star, opt.F_star);
  }
  opt.equilibrium_gap = equilibrium_gap(s, opt.policy, opt.q0, opt.R_star, opt.F_star);
  if (opt.F_star + 1e-9 < opt.min_frequency) {
    throw Error("internal: returned frequency violates the capacity constraint");
  }
}

}  // namespace detail

/// Jointly optimal split and frequency for one policy at demand q0.
inline PolicyOptimum optimize_policy(const Scenario& s, Policy policy, double q0) {
  if (!std::isfinite(q0) || q0 < 0.0) throw ValidationError("q0", "demand density must be >= 0");
  PolicyOptimum opt;
  opt.policy = policy;
  opt.q0 = q0;
  const CorridorGrid grid(s.geometry.length, s.solver.grid_cells);
  const double cap = frequency_cap(s, q0);

  auto inner = [&](double r) {
    return optimize_frequency_with(s.solver, min_frequency(s, q0, r), cap, [&](double f) {
      return PolicyEvaluation(s, policy, q0, r, f, grid).breakdown().total;
    });
  };

  if (q0 == 0.0) {
    // No travellers: every split costs the same, report the all-auto convention.
    opt.R_star = 1.0;
    const FrequencyOptimum f = inner(1.0);
    opt.evaluations = f.evaluations;
    detail::finish_optimum(s, opt, f);
    return opt;
  }

  if (s.solver.split_rule == SplitRule::cost_min) {
    GridSearch search;
    search.coarse_step = s.solver.split_step;
    search.refine_factor = s.solver.split_refine_factor;
    search.rounds = s.solver.split_rounds;
    int evaluations = 0;
    const GridMinResult r = grid_min(
        [&](double share) {
          try {
            const FrequencyOptimum f = inner(share);
            evaluations += f.evaluations;
            return f.cost;
          } catch (const InfeasibleError&) {
            return std::numeric_limits<double>::infinity();
          }
        },
        0.0, 1.0, search);
    opt.R_star = r.argmin;
    opt.evaluations = evaluations;
  } else {
    int evaluations = 0;
    auto gap_at = [&](double share) {
      const FrequencyOptimum f = inner(share);
      evaluations += f.evaluations;
      return detail::disutility_gap(PolicyEvaluation(s, policy, q0, share, f.frequency, grid))
          .signed_gap;
    };
    const double lo = 0.0;
    const double hi = 1.0;
    const double g_lo = gap_at(lo);
    const double g_hi = gap_at(hi);
    if (g_lo > 0.0 && g_hi > 0.0) {
      opt.R_star = 0.0;  // autos dearer at every split: everyone rides the bus
    } else if (g_lo < 0.0 && g_hi < 0.0) {
      opt.R_star = 1.0;
    } else {
      opt.R_star = find_root(gap_at, lo, hi, s.solver.equilibrium_tolerance);
    }
    opt.evaluations = evaluations;
  }

  const FrequencyOptimum f = inner(opt.R_star);
  opt.evaluations += f.evaluations;
  detail::finish_optimum(s, opt, f);
  return opt;
}

}  // namespace corridor
