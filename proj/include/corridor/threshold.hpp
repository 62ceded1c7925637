#pragma once

// Cost curves over demand density, pairwise switching thresholds and the
// best-policy decomposition of a demand range.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "corridor/numeric.hpp"
#include "corridor/optimizer.hpp"

namespace corridor {

struct CurveSample {
  double q0 = 0.0;
  std::optional<PolicyOptimum> optimum;  ///< empty when the sample failed
  std::string error;
};

struct CostCurve {
  Policy policy = Policy::mtp;
  std::vector<CurveSample> samples;
};

/// n evenly spaced values from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return out;
}

inline CostCurve cost_curve(const Scenario& s, Policy policy, double q0_lo, double q0_hi,
                            int n_samples) {
  if (!(q0_lo > 0.0) || !(q0_hi > q0_lo)) {
    throw ValidationError("q0_range", "need 0 < q0_lo < q0_hi");
  }
  if (n_samples < 2) throw ValidationError("n_samples", "need at least 2 samples");
  CostCurve curve;
  curve.policy = policy;
  for (double q : linspace(q0_lo, q0_hi, n_samples)) {
    CurveSample sample;
    sample.q0 = q;
    try {
      sample.optimum = optimize_policy(s, policy, q);
    } catch (const Error& e) {
      sample.error = e.what();
    }
    curve.samples.push_back(std::move(sample));
  }
  return curve;
}

struct ThresholdResult {
  Policy first = Policy::mtp;
  Policy second = Policy::mtp;
  std::optional<double> q0_star;
  Policy cheaper_below = Policy::mtp;
  Policy cheaper_above = Policy::mtp;
  bool equal = false;  ///< both totals coincide over the whole bracket
};

/// Total(p1) - Total(p2) at their respective optima.
inline double cost_difference(const Scenario& s, Policy p1, Policy p2, double q0) {
  if (p1 == p2) return 0.0;
  return optimize_policy(s, p1, q0).breakdown.total - optimize_policy(s, p2, q0).breakdown.total;
}

/// Crossing of the optimized totals nearest q0_lo. The bracket is scanned at
/// `threshold_scan_points` points first so that a double crossing inside it
/// is not missed by the bisection.
inline ThresholdResult find_threshold(const Scenario& s, Policy p1, Policy p2, double q0_lo,
                                      double q0_hi) {
  if (!(q0_lo < q0_hi)) throw ValidationError("q0_range", "need q0_lo < q0_hi");
  ThresholdResult out;
  out.first = p1;
  out.second = p2;
  if (p1 == p2) {
    out.equal = true;
    out.cheaper_below = out.cheaper_above = p1;
    return out;
  }
  auto delta = [&](double q) { return cost_difference(s, p1, p2, q); };
  const auto qs = linspace(q0_lo, q0_hi, s.solver.threshold_scan_points);
  double prev_q = qs.front();
  double prev_d = delta(prev_q);
  for (std::size_t k = 1; k < qs.size(); ++k) {
    const double q = qs[k];
    const double d = delta(q);
    if ((prev_d < 0.0 && d >= 0.0) || (prev_d > 0.0 && d <= 0.0)) {
      out.q0_star = find_root(delta, prev_q, q, s.solver.threshold_tolerance);
      out.cheaper_below = prev_d < 0.0 ? p1 : p2;
      out.cheaper_above = prev_d < 0.0 ? p2 : p1;
      return out;
    }
    prev_q = q;
    prev_d = d;
  }
  // No crossing: report the policy that is cheaper at the far end.
  out.cheaper_below = out.cheaper_above = prev_d <= 0.0 ? p1 : p2;
  return out;
}

struct PolicyRegion {
  double q0_from = 0.0;
  double q0_to = 0.0;
  Policy policy = Policy::mtp;
};

struct RegionSample {
  double q0 = 0.0;
  std::vector<std::optional<double>> totals;  ///< indexed like `allowed`
  Policy best = Policy::mtp;
};

struct RegionAnalysis {
  std::vector<Policy> allowed;
  std::vector<RegionSample> samples;
  std::vector<PolicyRegion> regions;
};

namespace detail {

inline Policy pointwise_best(const std::vector<Policy>& allowed,
                             const std::vector<std::optional<double>>& totals) {
  std::optional<std::size_t> best;
  for (Policy p : kAllPolicies) {  // fixed tie order
    for (std::size_t j = 0; j < allowed.size(); ++j) {
      if (allowed[j] != p || !totals[j]) continue;
      if (!best || *totals[j] < *totals[*best]) best = j;
    }
  }
  if (!best) throw Error("no allowed policy could be evaluated at this demand");
  return allowed[*best];
}

}  // namespace detail

/// Pointwise argmin of the optimized totals, sampled every `resolution`
/// pax/hr/mi and merged into maximal intervals. Interval boundaries are
/// refined by bisection between the two straddling samples.
inline RegionAnalysis policy_regions(const Scenario& s, double q0_lo, double q0_hi,
                                     double resolution, std::vector<Policy> allowed = {
                                                            kAllPolicies.begin(),
                                                            kAllPolicies.end()}) {
  if (!(q0_lo > 0.0) || !(q0_hi > q0_lo)) {
    throw ValidationError("q0_range", "need 0 < q0_lo < q0_hi");
  }
  if (!(resolution > 0.0)) throw ValidationError("resolution", "must be > 0");
  if (allowed.empty()) throw ValidationError("allowed", "need at least one policy");
  RegionAnalysis out;
  out.allowed = allowed;
  const int n = std::max(2, static_cast<int>(std::ceil((q0_hi - q0_lo) / resolution - 1e-9)) + 1);
  for (double q : linspace(q0_lo, q0_hi, n)) {
    RegionSample sample;
    sample.q0 = q;
    for (Policy p : allowed) {
      try {
        sample.totals.push_back(optimize_policy(s, p, q).breakdown.total);
      } catch (const Error&) {
        sample.totals.push_back(std::nullopt);
      }
    }
    sample.best = detail::pointwise_best(allowed, sample.totals);
    out.samples.push_back(std::move(sample));
  }

  out.regions.push_back({q0_lo, q0_lo, out.samples.front().best});
  for (std::size_t k = 1; k < out.samples.size(); ++k) {
    const auto& a = out.samples[k - 1];
    const auto& b = out.samples[k];
    if (b.best == a.best) continue;
    double boundary = 0.5 * (a.q0 + b.q0);
    try {
      boundary = find_root([&](double q) { return cost_difference(s, a.best, b.best, q); }, a.q0,
                           b.q0, s.solver.threshold_tolerance);
    } catch (const Error&) {
      // a third policy won at one end; the midpoint is within resolution
    }
    out.regions.back().q0_to = boundary;
    out.regions.push_back({boundary, boundary, b.best});
  }
  out.regions.back().q0_to = q0_hi;
  return out;
}

}  // namespace corridor
