#pragma once

// Scenario parameters for the bi-modal corridor. Units are fixed per field
// and never encoded in documents: miles, hours, veh/hr, pax/hr, dollars.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corridor/error.hpp"

namespace corridor {

struct Geometry {
  double length = 30.0;            ///< A, miles from CBD to city boundary
  int lanes = 3;                   ///< n_lane
  double lane_capacity = 1500.0;   ///< C, veh/hr per lane
  int intersections = 10;          ///< n_inter, evenly spaced

  /// l_i = A * i / (n_inter + 1) for i = 1..n_inter.
  std::vector<double> intersection_positions() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(intersections));
    for (int i = 1; i <= intersections; ++i) out.push_back(length * i / (intersections + 1));
    return out;
  }

  bool operator==(const Geometry&) const = default;
};

struct SignalParams {
  double cycle_length = 130.0;            ///< seconds
  double green_ratio = 0.7;               ///< lambda
  double incremental_delay_factor = 0.5;  ///< kappa
  double upstream_filtering = 1.0;        ///< phi
  double analysis_period = 1.0;           ///< t_I, hours

  bool operator==(const SignalParams&) const = default;
};

struct BprParams {
  double auto_free_flow_time = 0.05;   ///< hr/mi
  double bus_free_flow_time = 0.025;   ///< hr/mi
  double auto_alpha = 0.15;
  double auto_beta = 4.0;
  double bus_alpha = 0.15;
  double bus_beta = 4.0;
  double bus_equivalent = 3.0;         ///< K, autos per bus

  bool operator==(const BprParams&) const = default;
};

struct BusServiceParams {
  double capacity = 70.0;                 ///< O_b, pax/bus
  double fare = 1.0;                      ///< $/trip
  double wait_headway_factor = 0.5;       ///< gamma_1
  double wait_load_factor = 0.05;         ///< gamma_2
  double wait_load_exponent = 2.0;        ///< gamma_3
  double crowding_quadratic = 1e-6;       ///< iota_1
  double crowding_linear = 0.005;         ///< iota_2
  double fixed_operating_cost = 300.0;    ///< $ per analysis hour
  double variable_operating_cost = 20.0;  ///< $/hr per bus in the fleet

  bool operator==(const BusServiceParams&) const = default;
};

struct EconParams {
  double auto_time_value = 20.0;     ///< $/hr in-vehicle, auto
  double bus_time_value = 15.0;      ///< $/hr in-vehicle, bus
  double wait_time_value = 15.0;     ///< $/hr waiting
  double auto_fixed_cost = 2.0;      ///< $ per auto trip
  double auto_distance_cost = 0.3;   ///< $/mi per auto

  bool operator==(const EconParams&) const = default;
};

struct OccupancyParams {
  double low_occupancy_share = 0.6;  ///< mu, low-occupancy autos over all autos
  double low_occupancy = 1.0;        ///< O_la, pax/veh
  double high_occupancy = 3.0;       ///< O_ha, pax/veh

  bool operator==(const OccupancyParams&) const = default;
};

struct LanePolicyCosts {
  double ebl_fixed = 100.0;
  double ebl_variable = 5.0;    ///< applied per mile of corridor
  double hovl_fixed = 500.0;
  double hovl_variable = 10.0;  ///< applied per mile of corridor

  bool operator==(const LanePolicyCosts&) const = default;
};

enum class DelayVolumeMode { segment, cumulative };
enum class SplitRule { cost_min, equilibrium };

struct SolverSettings {
  int grid_cells = 600;

  double split_step = 0.01;
  double split_refine_factor = 10.0;
  int split_rounds = 1;

  double frequency_step = 1.0;
  double frequency_refine_factor = 10.0;
  int frequency_rounds = 1;
  double frequency_cap = 120.0;  ///< buses/hr
  /// Raise the cap to ceil(q0 A / (2 O_b)) so that every split stays feasible.
  bool frequency_cap_follows_demand = true;
  /// Consecutive non-improving integer frequencies before the inner scan stops; 0 = full lattice.
  int frequency_patience = 5;

  double threshold_tolerance = 1.0;     ///< pax/hr/mi
  int threshold_scan_points = 12;
  double equilibrium_tolerance = 1e-4;  ///< on the auto share

  DelayVolumeMode delay_volume_mode = DelayVolumeMode::segment;
  SplitRule split_rule = SplitRule::cost_min;

  bool operator==(const SolverSettings&) const = default;
};

struct Scenario {
  std::string name = "baseline";
  Geometry geometry;
  SignalParams signal;
  BprParams bpr;
  BusServiceParams bus;
  EconParams econ;
  OccupancyParams occupancy;
  LanePolicyCosts lane_costs;
  SolverSettings solver;
  /// Observed CBD demand density for case-study presets, pax/hr/mi.
  std::optional<double> reference_q0;

  bool operator==(const Scenario&) const = default;
};

inline std::string_view to_string(DelayVolumeMode m) {
  return m == DelayVolumeMode::segment ? "segment" : "cumulative";
}

inline std::string_view to_string(SplitRule r) {
  return r == SplitRule::cost_min ? "cost_min" : "equilibrium";
}

namespace detail {

inline void check(bool ok, const char* field, const char* rule) {
  if (!ok) throw ValidationError(field, rule);
}

inline bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

/// Throws ValidationError naming the first violated invariant.
inline void validate(const Scenario& s) {
  using detail::check;
  const auto& g = s.geometry;
  check(std::isfinite(g.length) && g.length > 0, "geometry.length", "corridor length A must be > 0");
  check(g.lanes >= 2, "geometry.lanes", "n_lane >= 2 required (lane policies remove one lane)");
  check(std::isfinite(g.lane_capacity) && g.lane_capacity > 0, "geometry.lane_capacity",
        "lane capacity C must be > 0");
  check(g.intersections >= 0, "geometry.intersections", "n_inter must be >= 0");

  const auto& sig = s.signal;
  check(detail::finite_all({sig.cycle_length, sig.green_ratio, sig.incremental_delay_factor,
                            sig.upstream_filtering, sig.analysis_period}),
        "signal", "all signal parameters must be finite");
  check(sig.cycle_length > 0, "signal.cycle_length", "cycle length must be > 0");
  check(sig.green_ratio > 0 && sig.green_ratio < 1, "signal.green_ratio",
        "green ratio lambda must lie in (0, 1)");
  check(sig.incremental_delay_factor > 0, "signal.incremental_delay_factor", "kappa must be > 0");
  check(sig.upstream_filtering > 0, "signal.upstream_filtering", "phi must be > 0");
  check(sig.analysis_period > 0, "signal.analysis_period", "t_I must be > 0");

  const auto& b = s.bpr;
  check(detail::finite_all({b.auto_free_flow_time, b.bus_free_flow_time, b.auto_alpha, b.auto_beta,
                            b.bus_alpha, b.bus_beta, b.bus_equivalent}),
        "bpr", "all BPR parameters must be finite");
  check(b.auto_free_flow_time > 0, "bpr.auto_free_flow_time", "free-flow time must be > 0");
  check(b.bus_free_flow_time > 0, "bpr.bus_free_flow_time", "free-flow time must be > 0");
  check(b.auto_alpha >= 0, "bpr.auto_alpha", "alpha must be >= 0");
  check(b.bus_alpha >= 0, "bpr.bus_alpha", "alpha must be >= 0");
  check(b.auto_beta >= 1, "bpr.auto_beta", "beta must be >= 1");
  check(b.bus_beta >= 1, "bpr.bus_beta", "beta must be >= 1");
  check(b.bus_equivalent >= 1, "bpr.bus_equivalent", "K must be >= 1");

  const auto& bus = s.bus;
  check(detail::finite_all({bus.capacity, bus.fare, bus.wait_headway_factor, bus.wait_load_factor,
                            bus.wait_load_exponent, bus.crowding_quadratic, bus.crowding_linear,
                            bus.fixed_operating_cost, bus.variable_operating_cost}),
        "bus", "all bus service parameters must be finite");
  check(bus.capacity > 0, "bus.capacity", "bus capacity O_b must be > 0");
  check(bus.fare >= 0, "bus.fare", "fare must be >= 0");
  check(bus.wait_headway_factor > 0, "bus.wait_headway_factor", "gamma_1 must be > 0");
  check(bus.wait_load_factor > 0, "bus.wait_load_factor", "gamma_2 must be > 0");
  check(bus.wait_load_exponent > 0, "bus.wait_load_exponent", "gamma_3 must be > 0");
  check(bus.crowding_quadratic >= 0, "bus.crowding_quadratic", "iota_1 must be >= 0");
  check(bus.crowding_linear >= 0, "bus.crowding_linear", "iota_2 must be >= 0");
  check(bus.fixed_operating_cost >= 0, "bus.fixed_operating_cost", "must be >= 0");
  check(bus.variable_operating_cost >= 0, "bus.variable_operating_cost", "must be >= 0");

  const auto& e = s.econ;
  check(detail::finite_all({e.auto_time_value, e.bus_time_value, e.wait_time_value,
                            e.auto_fixed_cost, e.auto_distance_cost}),
        "econ", "all economic parameters must be finite");
  check(e.auto_time_value >= 0, "econ.auto_time_value", "must be >= 0");
  check(e.bus_time_value >= 0, "econ.bus_time_value", "must be >= 0");
  check(e.wait_time_value >= 0, "econ.wait_time_value", "must be >= 0");
  check(e.auto_fixed_cost >= 0, "econ.auto_fixed_cost", "must be >= 0");
  check(e.auto_distance_cost >= 0, "econ.auto_distance_cost", "must be >= 0");

  const auto& o = s.occupancy;
  check(std::isfinite(o.low_occupancy_share) && o.low_occupancy_share >= 0 &&
            o.low_occupancy_share <= 1,
        "occupancy.low_occupancy_share", "mu must lie in [0, 1]");
  check(std::isfinite(o.low_occupancy) && o.low_occupancy > 0, "occupancy.low_occupancy",
        "O_la must be > 0");
  check(std::isfinite(o.high_occupancy) && o.high_occupancy >= o.low_occupancy,
        "occupancy.high_occupancy", "O_ha must be >= O_la");

  const auto& l = s.lane_costs;
  check(detail::finite_all({l.ebl_fixed, l.ebl_variable, l.hovl_fixed, l.hovl_variable}),
        "lane_costs", "all lane policy costs must be finite");
  check(l.ebl_fixed >= 0 && l.ebl_variable >= 0 && l.hovl_fixed >= 0 && l.hovl_variable >= 0,
        "lane_costs", "lane policy costs must be >= 0");

  const auto& v = s.solver;
  check(v.grid_cells >= 2 && v.grid_cells % 2 == 0, "solver.grid_cells",
        "grid cell count must be even and >= 2");
  check(v.split_step > 0 && v.split_step <= 1, "solver.split_step", "must lie in (0, 1]");
  check(v.split_refine_factor > 1, "solver.split_refine_factor", "must be > 1");
  check(v.split_rounds >= 0, "solver.split_rounds", "must be >= 0");
  check(v.frequency_step > 0, "solver.frequency_step", "must be > 0");
  check(v.frequency_refine_factor > 1, "solver.frequency_refine_factor", "must be > 1");
  check(v.frequency_rounds >= 0, "solver.frequency_rounds", "must be >= 0");
  check(v.frequency_cap >= 1, "solver.frequency_cap", "must be >= 1 bus/hr");
  check(v.frequency_patience >= 0, "solver.frequency_patience", "must be >= 0");
  check(v.threshold_tolerance > 0, "solver.threshold_tolerance", "must be > 0");
  check(v.threshold_scan_points >= 2, "solver.threshold_scan_points", "must be >= 2");
  check(v.equilibrium_tolerance > 0, "solver.equilibrium_tolerance", "must be > 0");

  if (s.reference_q0) {
    check(std::isfinite(*s.reference_q0) && *s.reference_q0 > 0, "reference_q0", "must be > 0");
  }
}

/// Names accepted by preset().
inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"baseline", "seattle_i5", "seattle_sr99"};
  return names;
}

/// Built-in scenarios. Case-study presets change length, auto speed and the
/// reference demand; the bus free-flow time keeps the baseline bus/auto ratio.
inline Scenario preset(std::string_view name) {
  Scenario s;
  if (name == "baseline") return s;
  if (name == "seattle_i5") {
    s.name = "seattle_i5";
    s.geometry.length = 27.7;
    s.bpr.auto_free_flow_time = 1.0 / 60.0;
    s.bpr.bus_free_flow_time = s.bpr.auto_free_flow_time * (0.025 / 0.05);
    s.reference_q0 = 1476.0;
    return s;
  }
  if (name == "seattle_sr99") {
    s.name = "seattle_sr99";
    s.geometry.length = 26.9;
    s.bpr.auto_free_flow_time = 1.0 / 35.0;
    s.bpr.bus_free_flow_time = s.bpr.auto_free_flow_time * (0.025 / 0.05);
    s.reference_q0 = 1245.0;
    return s;
  }
  throw ValidationError("preset", "unknown preset '" + std::string(name) +
                                      "' (expected baseline, seattle_i5 or seattle_sr99)");
}

}  // namespace corridor
