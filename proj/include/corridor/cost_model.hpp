#pragma once

// Policy-specific cost physics: BPR unit times, line-haul times, waiting,
// crowding discomfort, signal delay and the four system cost components.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "corridor/demand.hpp"
#include "corridor/error.hpp"
#include "corridor/numeric.hpp"
#include "corridor/policy.hpp"
#include "corridor/scenario.hpp"

namespace corridor {

/// Hourly system cost components, $/hr.
struct CostBreakdown {
  double bus_user = 0.0;
  double bus_operator = 0.0;
  double auto_user = 0.0;
  double signal = 0.0;
  double total = 0.0;
};

/// t0 (1 + alpha (volume / capacity)^beta), hr/mi.
inline double bpr_time(double t0, double alpha, double beta, double volume, double capacity) {
  return t0 * (1.0 + alpha * power(volume / capacity, beta));
}

/// Per-vehicle delay at a signalized intersection in seconds: uniform delay
/// plus the incremental (overflow) term.
inline double intersection_delay(const SignalParams& sig, double arrivals, double capacity) {
  if (!(capacity > 0.0)) throw NumericDomainError("intersection capacity must be positive");
  if (!(arrivals >= 0.0)) throw NumericDomainError("intersection arrivals must be non-negative");
  const double x = arrivals / capacity;
  const double red = 1.0 - sig.green_ratio;
  const double uniform =
      sig.cycle_length * red * red / (2.0 * (1.0 - std::min(1.0, x) * sig.green_ratio));
  const double t = sig.analysis_period;
  const double overflow =
      900.0 * t *
      ((x - 1.0) + std::sqrt((x - 1.0) * (x - 1.0) +
                             8.0 * sig.incremental_delay_factor * sig.upstream_filtering * x /
                                 (capacity * t)));
  return uniform + overflow;
}

/// Crowding disutility rate iota_1 Q^2 + iota_2 Q, $/hr per passenger.
inline double crowding_rate(const BusServiceParams& bus, double onboard) {
  return bus.crowding_quadratic * onboard * onboard + bus.crowding_linear * onboard;
}

struct DelayArgs {
  double arrivals = 0.0;  ///< veh/hr reaching the approach
  double capacity = 0.0;  ///< veh/hr
};

/// One (policy, q0, R, F) point with every position-dependent profile
/// tabulated on the corridor grid. Holds a reference to the scenario, which
/// must outlive the evaluation.
class PolicyEvaluation {
 public:
  PolicyEvaluation(const Scenario& scenario, Policy policy, double q0, double auto_share,
                   double frequency)
      : PolicyEvaluation(scenario, policy, q0, auto_share, frequency,
                         CorridorGrid(scenario.geometry.length, scenario.solver.grid_cells)) {}

  PolicyEvaluation(const Scenario& scenario, Policy policy, double q0, double auto_share,
                   double frequency, const CorridorGrid& grid)
      : s_(scenario),
        policy_(policy),
        grid_(grid),
        field_{q0, scenario.geometry.length, auto_share},
        frequency_(frequency),
        split_(occupancy_split(scenario.occupancy)) {
    if (!std::isfinite(q0) || q0 < 0.0) throw ValidationError("q0", "demand density must be >= 0");
    if (!std::isfinite(auto_share) || auto_share < 0.0 || auto_share > 1.0) {
      throw ValidationError("R", "auto share must lie in [0, 1]");
    }
    if (!std::isfinite(frequency) || frequency < 0.0) {
      throw ValidationError("F", "bus frequency must be >= 0");
    }
    if (std::abs(grid.length() - scenario.geometry.length) > 1e-12 * scenario.geometry.length) {
      throw ValidationError("grid", "grid length differs from the corridor length");
    }
    tabulate_profiles();
    if (frequency_ > 0.0) tabulate_costs();
  }

  const Scenario& scenario() const noexcept { return s_; }
  Policy policy() const noexcept { return policy_; }
  double q0() const noexcept { return field_.q0; }
  double auto_share() const noexcept { return field_.auto_share; }
  double frequency() const noexcept { return frequency_; }
  const CorridorGrid& grid() const noexcept { return grid_; }
  const DemandField& field() const noexcept { return field_; }
  const OccupancySplit& occupancy() const noexcept { return split_; }

  /// Auto-equivalent volume and capacity seen by `cls` at x.
  DelayArgs link_load(TravelClass cls, double x) const {
    require_class(policy_, cls);
    const double qa = cumulative_demand(field_, DemandMode::automobile, x);
    return link_load_from(cls, qa);
  }

  /// Unit travel time of `cls` at x, hr/mi.
  double unit_time(TravelClass cls, double x) const {
    const DelayArgs load = link_load(cls, x);
    return unit_time_from(cls, load);
  }

  /// Unit time tabulated at every grid node.
  const std::vector<double>& unit_time_profile(TravelClass cls) const {
    require_class(policy_, cls);
    return unit_[slot(cls)];
  }

  /// Line-haul time from the CBD tabulated at every grid node.
  const std::vector<double>& line_haul_profile(TravelClass cls) const {
    require_class(policy_, cls);
    return haul_[slot(cls)];
  }

  /// Line-haul time from the CBD to x, hours.
  double line_haul_time(TravelClass cls, double x) const {
    require_class(policy_, cls);
    return integrate([&](double w) { return unit_time(cls, w); }, 0.0, x, grid_);
  }

  /// Expected wait at a stop at x, hours.
  double waiting_time(double x) const {
    require_service();
    return waiting_from(cumulative_demand(field_, DemandMode::bus, x));
  }

  /// Accumulated crowding discomfort for a bus rider from x to the CBD, $.
  double discomfort(double x) const {
    return integrate(
        [&](double w) {
          return crowding_rate(s_.bus, cumulative_demand(field_, DemandMode::bus, w)) *
                 unit_time(TravelClass::bus, w);
        },
        0.0, x, grid_);
  }

  double bus_disutility(double x) const {
    const auto& e = s_.econ;
    return e.wait_time_value * waiting_time(x) + e.bus_time_value * line_haul_time(TravelClass::bus, x) +
           discomfort(x) + s_.bus.fare;
  }

  double auto_disutility(TravelClass cls, double x) const {
    require_class(policy_, cls);
    if (cls == TravelClass::bus) throw ValidationError("class", "bus is not an auto class");
    const auto& e = s_.econ;
    return e.auto_time_value * line_haul_time(cls, x) +
           (e.auto_fixed_cost + e.auto_distance_cost * x) / occupancy_of(cls);
  }

  /// Arrivals and capacity at intersection i (1-based) for `cls`.
  DelayArgs delay_args(TravelClass cls, int i) const {
    require_class(policy_, cls);
    const int n = s_.geometry.intersections;
    if (i < 1 || i > n) {
      throw ValidationError("intersection", "index " + std::to_string(i) + " outside 1.." +
                                                std::to_string(n));
    }
    const double A = field_.length;
    const double li = A * i / (n + 1);
    const double next = (i == n) ? A : A * (i + 1) / (n + 1);
    const double oa = split_.average_occupancy;
    double autos = 0.0;
    if (s_.solver.delay_volume_mode == DelayVolumeMode::segment) {
      autos = (cumulative_demand(field_, DemandMode::automobile, li) -
               cumulative_demand(field_, DemandMode::automobile, next)) /
              oa;
    } else {
      autos = cumulative_demand(field_, DemandMode::automobile, li) / oa;
    }
    const double buses = s_.bpr.bus_equivalent * frequency_ / (n + 1);
    const double lanes = s_.geometry.lanes;
    const double c = s_.geometry.lane_capacity;
    const double mu = s_.occupancy.low_occupancy_share;
    switch (policy_) {
      case Policy::mtp: return {autos + buses, lanes * c};
      case Policy::eblp:
        if (cls == TravelClass::bus) return {buses, c};
        return {autos, (lanes - 1) * c};
      case Policy::hovlp:
        if (cls == TravelClass::low_occ_auto) return {mu * autos, (lanes - 1) * c};
        return {(1.0 - mu) * autos + buses, c};
    }
    return {};
  }

  /// Per-vehicle delay at intersection i for `cls`, seconds.
  double delay_seconds(TravelClass cls, int i) const {
    const DelayArgs d = delay_args(cls, i);
    return intersection_delay(s_.signal, d.arrivals, d.capacity);
  }

  /// Passenger-hours of signal delay per hour for one mode.
  double total_intersection_delay(DemandMode mode) const {
    if (mode == DemandMode::total) {
      return total_intersection_delay(DemandMode::automobile) +
             total_intersection_delay(DemandMode::bus);
    }
    const int n = s_.geometry.intersections;
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double li = field_.length * i / (n + 1);
      const double passing = cumulative_demand(field_, mode, li);
      if (mode == DemandMode::bus) {
        sum += delay_seconds(TravelClass::bus, i) * passing;
      } else if (policy_ == Policy::hovlp) {
        sum += split_.low_share * passing * delay_seconds(TravelClass::low_occ_auto, i) +
               split_.high_share * passing * delay_seconds(TravelClass::high_occ_auto, i);
      } else {
        sum += delay_seconds(TravelClass::automobile, i) * passing;
      }
    }
    return sum / 3600.0;
  }

  /// Bus and auto disutility at every node; autos are the q_l/q_h mix under HOVLP.
  const std::vector<double>& bus_disutility_profile() const {
    require_service();
    return bus_disutility_;
  }
  const std::vector<double>& auto_disutility_profile() const {
    require_service();
    return auto_disutility_;
  }

  CostBreakdown breakdown() const {
    require_service();
    return breakdown_;
  }

 private:
  static constexpr std::size_t kSlots = 3;

  std::size_t slot(TravelClass cls) const {
    if (cls == TravelClass::bus) return 0;
    if (cls == TravelClass::high_occ_auto) return 2;
    return 1;  // automobile or low_occ_auto
  }

  double occupancy_of(TravelClass cls) const {
    if (cls == TravelClass::low_occ_auto) return s_.occupancy.low_occupancy;
    if (cls == TravelClass::high_occ_auto) return s_.occupancy.high_occupancy;
    return split_.average_occupancy;
  }

  void require_service() const {
    if (!(frequency_ > 0.0)) {
      throw ServiceError("bus waiting time and costs are undefined at zero frequency");
    }
  }

  DelayArgs link_load_from(TravelClass cls, double auto_demand) const {
    const double oa = split_.average_occupancy;
    const double kf = s_.bpr.bus_equivalent * frequency_;
    const double lanes = s_.geometry.lanes;
    const double c = s_.geometry.lane_capacity;
    switch (policy_) {
      case Policy::mtp: return {auto_demand / oa + kf, lanes * c};
      case Policy::eblp:
        if (cls == TravelClass::bus) return {kf, c};
        return {auto_demand / oa, (lanes - 1) * c};
      case Policy::hovlp:
        if (cls == TravelClass::low_occ_auto) {
          return {split_.low_share * auto_demand / s_.occupancy.low_occupancy, (lanes - 1) * c};
        }
        return {split_.high_share * auto_demand / s_.occupancy.high_occupancy + kf, c};
    }
    return {};
  }

  double unit_time_from(TravelClass cls, const DelayArgs& load) const {
    const auto& b = s_.bpr;
    if (cls == TravelClass::bus) {
      return bpr_time(b.bus_free_flow_time, b.bus_alpha, b.bus_beta, load.arrivals, load.capacity);
    }
    return bpr_time(b.auto_free_flow_time, b.auto_alpha, b.auto_beta, load.arrivals, load.capacity);
  }

  double waiting_from(double bus_demand) const {
    const auto& bus = s_.bus;
    const double f = frequency_;
    return bus.wait_headway_factor / f +
           bus.wait_load_factor / f * power(bus_demand / (bus.capacity * f), bus.wait_load_exponent);
  }

  std::vector<TravelClass> classes() const {
    if (policy_ == Policy::hovlp) {
      return {TravelClass::bus, TravelClass::low_occ_auto, TravelClass::high_occ_auto};
    }
    return {TravelClass::bus, TravelClass::automobile};
  }

  void tabulate_profiles() {
    const std::size_t m = grid_.size();
    const double A = field_.length;
    x_.resize(m);
    auto_demand_.resize(m);
    bus_demand_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      x_[k] = grid_.node(k);
      const double rest = A - x_[k];
      const double total = field_.q0 * rest * rest / (2.0 * A);
      auto_demand_[k] = field_.auto_share * total;
      bus_demand_[k] = (1.0 - field_.auto_share) * total;
    }
    const double h = grid_.step();
    for (TravelClass cls : classes()) {
      auto& u = unit_[slot(cls)];
      u.resize(m);
      for (std::size_t k = 0; k < m; ++k) {
        u[k] = unit_time_from(cls, link_load_from(cls, auto_demand_[k]));
        detail::require_finite(u[k], x_[k], k);
      }
      haul_[slot(cls)] = cumulative_simpson(u, h);
    }
  }

  void tabulate_costs() {
    const std::size_t m = grid_.size();
    const double h = grid_.step();
    const double A = field_.length;
    const auto& e = s_.econ;

    const auto& tb = unit_[slot(TravelClass::bus)];
    const auto& haul_b = haul_[slot(TravelClass::bus)];
    std::vector<double> work(m);
    for (std::size_t k = 0; k < m; ++k) work[k] = crowding_rate(s_.bus, bus_demand_[k]) * tb[k];
    const std::vector<double> crowd = cumulative_simpson(work, h);

    bus_disutility_.resize(m);
    auto_disutility_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      bus_disutility_[k] = e.wait_time_value * waiting_from(bus_demand_[k]) +
                           e.bus_time_value * haul_b[k] + crowd[k] + s_.bus.fare;
      const double money = e.auto_fixed_cost + e.auto_distance_cost * x_[k];
      if (policy_ == Policy::hovlp) {
        const double low = e.auto_time_value * haul_[slot(TravelClass::low_occ_auto)][k] +
                           money / s_.occupancy.low_occupancy;
        const double high = e.auto_time_value * haul_[slot(TravelClass::high_occ_auto)][k] +
                            money / s_.occupancy.high_occupancy;
        auto_disutility_[k] = split_.low_share * low + split_.high_share * high;
      } else {
        auto_disutility_[k] = e.auto_time_value * haul_[slot(TravelClass::automobile)][k] +
                              money / split_.average_occupancy;
      }
    }

    // Riders board along the corridor at density q_b(x) = (1 - R) q0 (1 - x/A).
    for (std::size_t k = 0; k < m; ++k) {
      const double q = field_.q0 * (1.0 - x_[k] / A);
      work[k] = bus_disutility_[k] * (1.0 - field_.auto_share) * q;
    }
    breakdown_.bus_user =
        simpson(work, h) + e.bus_time_value * total_intersection_delay(DemandMode::bus);
    for (std::size_t k = 0; k < m; ++k) {
      const double q = field_.q0 * (1.0 - x_[k] / A);
      work[k] = auto_disutility_[k] * field_.auto_share * q;
    }
    breakdown_.auto_user =
        simpson(work, h) + e.auto_time_value * total_intersection_delay(DemandMode::automobile);
    breakdown_.bus_operator = s_.bus.fixed_operating_cost +
                              s_.bus.variable_operating_cost * 2.0 * haul_b.back() * frequency_;
    const auto& lc = s_.lane_costs;
    switch (policy_) {
      case Policy::mtp: breakdown_.signal = 0.0; break;
      case Policy::eblp: breakdown_.signal = lc.ebl_fixed + lc.ebl_variable * A; break;
      case Policy::hovlp: breakdown_.signal = lc.hovl_fixed + lc.hovl_variable * A; break;
    }
    breakdown_.total =
        breakdown_.bus_user + breakdown_.bus_operator + breakdown_.auto_user + breakdown_.signal;
  }

  const Scenario& s_;
  Policy policy_;
  CorridorGrid grid_;
  DemandField field_;
  double frequency_;
  OccupancySplit split_;

  std::vector<double> x_;
  std::vector<double> auto_demand_;
  std::vector<double> bus_demand_;
  std::vector<double> unit_[kSlots];
  std::vector<double> haul_[kSlots];
  std::vector<double> bus_disutility_;
  std::vector<double> auto_disutility_;
  CostBreakdown breakdown_;
};

using EvaluationContext = PolicyEvaluation;

inline CostBreakdown cost_breakdown(const Scenario& s, Policy policy, double q0, double auto_share,
                                    double frequency) {
  return PolicyEvaluation(s, policy, q0, auto_share, frequency).breakdown();
}

}  // namespace corridor
