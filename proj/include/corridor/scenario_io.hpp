#pragma once

// JSON (de)serialization of Scenario. Documents may name a "preset" to start
// from; every other key overrides it. Unknown keys are rejected by path.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "corridor/scenario.hpp"

namespace corridor {

using json = nlohmann::json;

namespace detail {

class SectionReader {
 public:
  SectionReader(const json& section, std::string path) : section_(section), path_(std::move(path)) {
    if (!section_.is_object()) throw ValidationError(path_, "expected a JSON object");
    for (auto it = section_.begin(); it != section_.end(); ++it) pending_.push_back(it.key());
  }

  template <class T>
  void read(const char* key, T& target) {
    std::erase(pending_, std::string(key));
    if (!section_.contains(key)) return;
    const auto& v = section_.at(key);
    const std::string where = path_ + "/" + key;
    if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ValidationError(where, "expected an integer");
      target = v.get<int>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ValidationError(where, "expected true or false");
      target = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ValidationError(where, "expected a string");
      target = v.get<std::string>();
    } else {
      if (!v.is_number()) throw ValidationError(where, "expected a number");
      target = v.get<double>();
    }
  }

  template <class F>
  void read_with(const char* key, F&& apply) {
    std::erase(pending_, std::string(key));
    if (section_.contains(key)) apply(section_.at(key), path_ + "/" + key);
  }

  void finish() const {
    if (!pending_.empty()) throw ValidationError(path_ + "/" + pending_.front(), "unknown key");
  }

 private:
  const json& section_;
  std::string path_;
  std::vector<std::string> pending_;
};

}  // namespace detail

inline json to_json(const Scenario& s) {
  const auto& g = s.geometry;
  const auto& sig = s.signal;
  const auto& b = s.bpr;
  const auto& bus = s.bus;
  const auto& e = s.econ;
  const auto& o = s.occupancy;
  const auto& l = s.lane_costs;
  const auto& v = s.solver;
  json j = {
      {"name", s.name},
      {"geometry",
       {{"length", g.length},
        {"lanes", g.lanes},
        {"lane_capacity", g.lane_capacity},
        {"intersections", g.intersections}}},
      {"signal",
       {{"cycle_length", sig.cycle_length},
        {"green_ratio", sig.green_ratio},
        {"incremental_delay_factor", sig.incremental_delay_factor},
        {"upstream_filtering", sig.upstream_filtering},
        {"analysis_period", sig.analysis_period}}},
      {"bpr",
       {{"auto_free_flow_time", b.auto_free_flow_time},
        {"bus_free_flow_time", b.bus_free_flow_time},
        {"auto_alpha", b.auto_alpha},
        {"auto_beta", b.auto_beta},
        {"bus_alpha", b.bus_alpha},
        {"bus_beta", b.bus_beta},
        {"bus_equivalent", b.bus_equivalent}}},
      {"bus",
       {{"capacity", bus.capacity},
        {"fare", bus.fare},
        {"wait_headway_factor", bus.wait_headway_factor},
        {"wait_load_factor", bus.wait_load_factor},
        {"wait_load_exponent", bus.wait_load_exponent},
        {"crowding_quadratic", bus.crowding_quadratic},
        {"crowding_linear", bus.crowding_linear},
        {"fixed_operating_cost", bus.fixed_operating_cost},
        {"variable_operating_cost", bus.variable_operating_cost}}},
      {"econ",
       {{"auto_time_value", e.auto_time_value},
        {"bus_time_value", e.bus_time_value},
        {"wait_time_value", e.wait_time_value},
        {"auto_fixed_cost", e.auto_fixed_cost},
        {"auto_distance_cost", e.auto_distance_cost}}},
      {"occupancy",
       {{"low_occupancy_share", o.low_occupancy_share},
        {"low_occupancy", o.low_occupancy},
        {"high_occupancy", o.high_occupancy}}},
      {"lane_costs",
       {{"ebl_fixed", l.ebl_fixed},
        {"ebl_variable", l.ebl_variable},
        {"hovl_fixed", l.hovl_fixed},
        {"hovl_variable", l.hovl_variable}}},
      {"solver",
       {{"grid_cells", v.grid_cells},
        {"split_step", v.split_step},
        {"split_refine_factor", v.split_refine_factor},
        {"split_rounds", v.split_rounds},
        {"frequency_step", v.frequency_step},
        {"frequency_refine_factor", v.frequency_refine_factor},
        {"frequency_rounds", v.frequency_rounds},
        {"frequency_cap", v.frequency_cap},
        {"frequency_cap_follows_demand", v.frequency_cap_follows_demand},
        {"frequency_patience", v.frequency_patience},
        {"threshold_tolerance", v.threshold_tolerance},
        {"threshold_scan_points", v.threshold_scan_points},
        {"equilibrium_tolerance", v.equilibrium_tolerance},
        {"delay_volume_mode", std::string(to_string(v.delay_volume_mode))},
        {"split_rule", std::string(to_string(v.split_rule))}}},
  };
  j["reference_q0"] = s.reference_q0 ? json(*s.reference_q0) : json(nullptr);
  return j;
}

/// Builds and validates a Scenario from a parsed document.
inline Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("", "scenario document must be a JSON object");
  Scenario s;
  if (doc.contains("preset")) {
    if (!doc.at("preset").is_string()) throw ValidationError("/preset", "expected a string");
    s = preset(doc.at("preset").get<std::string>());
  }

  detail::SectionReader top(doc, "");
  top.read_with("preset", [](const json&, const std::string&) {});
  top.read("name", s.name);
  top.read_with("reference_q0", [&](const json& v, const std::string& where) {
    if (v.is_null()) {
      s.reference_q0.reset();
    } else if (v.is_number()) {
      s.reference_q0 = v.get<double>();
    } else {
      throw ValidationError(where, "expected a number or null");
    }
  });
  top.read_with("geometry", [&](const json& v, const std::string& where) {
    detail::SectionReader r(v, where);
    r.read("length", s.geometry.length);
    r.read("lanes", s.geometry.lanes);
    r.read("lane_capacity", s.geometry.lane_capacity);
    r.read("intersections", s.geometry.intersections);
    r.finish();
  });
  top.read_with("signal", [&](const json& v, const std::string& where) {
    detail::SectionReader r(v, where);
    r.read("cycle_length", s.signal.cycle_length);
    r.read("green_ratio", s.signal.green_ratio);
    r.read("incremental_delay_factor", s.signal.incremental_delay_factor);
    r.read("upstream_filtering", s.signal.upstream_filtering);
    r.read("analysis_period", s.signal.analysis_period);
    r.finish();
  });
  top.read_with("bpr", [&](const json& v, const std::string& where) {
    detail::SectionReader r(v, where);
    r.read("auto_free_flow_time", s.bpr.auto_free_flow_time);
    r.read("bus_free_flow_time", s.bpr.bus_free_flow_time);
    r.read("auto_alpha", s.bpr.auto_alpha);
    r.read("auto_beta", s.bpr.auto_beta);
    r.read("bus_alpha", s.bpr.bus_alpha);
    r.read("bus_beta", s.bpr.bus_beta);
    r.read("bus_equivalent", s.bpr.bus_equivalent);
    r.finish();
  });
  top.read_with("bus", [&](const json& v, const std::string& where) {
    detail::SectionReader r(v, where);
    r.read("capacity", s.bus.capacity);
    r.read("fare", s.bus.fare);
    r.read("wait_headway_factor", s.bus.wait_headway_factor);
    r.read("wait_load_factor", s.bus.wait_load_factor);
    r.read("wait_load_exponent", s.bus.wait_load_exponent);
    r.read("crowding_quadratic", s.bus.crowding_quadratic);
    r.read("crowding_linear", s.bus.crowding_linear);
    r.read("fixed_operating_cost", s.bus.fixed_operating_cost);
    r.read("variable_operating_cost", s.bus.variable_operating_cost);
    r.finish();
  });
  top.read_with("econ", [&](const json& v, const std::string& where) {
    detail::SectionReader r(v, where);
    r.read("auto_time_value", s.econ.auto_time_value);
    r.read("bus_time_value", s.econ.bus_time_value);
    r.read("wait_time_value", s.econ.wait_time_value);
    r.read("auto_fixed_cost", s.econ.auto_fixed_cost);
    r.read("auto_distance_cost", s.econ.auto_distance_cost);
    r.finish();
  });
  top.read_with("occupancy", [&](const json& v, const std::string& where) {
    detail::SectionReader r(v, where);
    r.read("low_occupancy_share", s.occupancy.low_occupancy_share);
    r.read("low_occupancy", s.occupancy.low_occupancy);
    r.read("high_occupancy", s.occupancy.high_occupancy);
    r.finish();
  });
  top.read_with("lane_costs", [&](const json& v, const std::string& where) {
    detail::SectionReader r(v, where);
    r.read("ebl_fixed", s.lane_costs.ebl_fixed);
    r.read("ebl_variable", s.lane_costs.ebl_variable);
    r.read("hovl_fixed", s.lane_costs.hovl_fixed);
    r.read("hovl_variable", s.lane_costs.hovl_variable);
    r.finish();
  });
  top.read_with("solver", [&](const json& v, const std::string& where) {
    detail::SectionReader r(v, where);
    auto& x = s.solver;
    r.read("grid_cells", x.grid_cells);
    r.read("split_step", x.split_step);
    r.read("split_refine_factor", x.split_refine_factor);
    r.read("split_rounds", x.split_rounds);
    r.read("frequency_step", x.frequency_step);
    r.read("frequency_refine_factor", x.frequency_refine_factor);
    r.read("frequency_rounds", x.frequency_rounds);
    r.read("frequency_cap", x.frequency_cap);
    r.read("frequency_cap_follows_demand", x.frequency_cap_follows_demand);
    r.read("frequency_patience", x.frequency_patience);
    r.read("threshold_tolerance", x.threshold_tolerance);
    r.read("threshold_scan_points", x.threshold_scan_points);
    r.read("equilibrium_tolerance", x.equilibrium_tolerance);
    r.read_with("delay_volume_mode", [&](const json& m, const std::string& w) {
      if (m == "segment") {
        x.delay_volume_mode = DelayVolumeMode::segment;
      } else if (m == "cumulative") {
        x.delay_volume_mode = DelayVolumeMode::cumulative;
      } else {
        throw ValidationError(w, "expected \"segment\" or \"cumulative\"");
      }
    });
    r.read_with("split_rule", [&](const json& m, const std::string& w) {
      if (m == "cost_min") {
        x.split_rule = SplitRule::cost_min;
      } else if (m == "equilibrium") {
        x.split_rule = SplitRule::equilibrium;
      } else {
        throw ValidationError(w, "expected \"cost_min\" or \"equilibrium\"");
      }
    });
    r.finish();
  });
  top.finish();

  validate(s);
  return s;
}

/// Parses scenario text. Syntax errors carry the byte offset.
inline Scenario load_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("scenario parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return scenario_from_json(doc);
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

inline std::string serialize(const Scenario& s) { return to_json(s).dump(2); }

/// FNV-1a over the canonical serialization; stable across runs and platforms.
inline std::string scenario_hash(const Scenario& s) {
  const std::string text = to_json(s).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

}  // namespace corridor
