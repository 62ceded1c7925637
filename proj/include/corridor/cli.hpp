#pragma once

// Command-line front end: cost, sweep, simulate, schedule. Every invocation
// writes one run directory (manifest.json plus CSV/JSON/text outputs),
// staged under DIR.tmp and renamed into place when complete.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corridor/scenario_io.hpp"
#include "corridor/scheduler.hpp"
#include "corridor/stochastic.hpp"
#include "corridor/threshold.hpp"

#ifndef CORRIDOR_VERSION
#define CORRIDOR_VERSION "0.1.0"
#endif

namespace corridor::cli {

enum ExitCode : int { ok = 0, validation = 2, infeasible = 3, io = 4 };

/// Filesystem failure while reading inputs or writing a run directory.
class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kManifestSchema = 1;

namespace detail {

inline std::string utc_stamp(std::chrono::system_clock::time_point t, bool compact) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, compact ? "%Y%m%dT%H%M%SZ" : "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

inline std::string num(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

inline std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

/// Output directory staged as DIR.tmp and renamed on commit.
class RunDirectory {
 public:
  explicit RunDirectory(std::filesystem::path final_path) : final_(std::move(final_path)) {
    namespace fs = std::filesystem;
    staging_ = final_;
    staging_ += ".tmp";
    std::error_code ec;
    if (fs::exists(final_, ec)) {
      throw IoError("output directory '" + final_.string() + "' already exists");
    }
    fs::remove_all(staging_, ec);
    fs::create_directories(staging_, ec);
    if (ec) throw IoError("cannot create '" + staging_.string() + "': " + ec.message());
  }

  RunDirectory(const RunDirectory&) = delete;
  RunDirectory& operator=(const RunDirectory&) = delete;

  ~RunDirectory() {
    if (!committed_) {
      std::error_code ec;
      std::filesystem::remove_all(staging_, ec);
    }
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(staging_ / name, std::ios::binary);
    out << content;
    if (!out) throw IoError("cannot write '" + (staging_ / name).string() + "'");
    files_.push_back(name);
  }

  void commit() {
    std::error_code ec;
    std::filesystem::rename(staging_, final_, ec);
    if (ec) throw IoError("cannot move run directory into '" + final_.string() + "': " + ec.message());
    committed_ = true;
  }

  const std::filesystem::path& path() const noexcept { return final_; }
  const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  std::filesystem::path final_;
  std::filesystem::path staging_;
  std::vector<std::string> files_;
  bool committed_ = false;
};

inline std::filesystem::path default_run_path(const std::string& root, const std::string& command,
                                              std::chrono::system_clock::time_point t) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(root) / (command + "-" + utc_stamp(t, true));
  fs::path candidate = base;
  for (int k = 2; fs::exists(candidate) || fs::exists(fs::path(candidate.string() + ".tmp")); ++k) {
    candidate = fs::path(base.string() + "-" + std::to_string(k));
  }
  return candidate;
}

inline std::string csv_preamble(const std::string& units) {
  return "# units: " + units + "; manifest=manifest.json\n";
}

struct ScenarioOptions {
  std::string preset = "baseline";
  std::string file;
  std::optional<int> intersections;
  std::optional<double> wait_value;
  std::optional<std::string> delay_mode;
  std::optional<std::string> split_rule;
  std::optional<double> frequency_cap;
  std::optional<int> grid_cells;

  void attach(CLI::App& app) {
    auto* p = app.add_option("--preset", preset, "Built-in scenario: baseline, seattle_i5, seattle_sr99");
    auto* f = app.add_option("--scenario", file, "Scenario JSON file");
    p->excludes(f);
    app.add_option("--intersections", intersections, "Override the intersection count");
    app.add_option("--wait-value", wait_value, "Override the waiting value of time, $/hr");
    app.add_option("--delay-mode", delay_mode, "Intersection volume mode: segment or cumulative");
    app.add_option("--split-rule", split_rule, "Mode split rule: cost_min or equilibrium");
    app.add_option("--frequency-cap", frequency_cap, "Bus frequency search cap, buses/hr");
    app.add_option("--grid-cells", grid_cells, "Corridor grid cells (even)");
  }

  Scenario build() const {
    json doc = file.empty() ? json{{"preset", preset}} : read_json_file(file);
    auto& solver = doc["solver"];
    if (solver.is_null()) solver = json::object();
    auto put = [&](const char* section, const char* key, json value) {
      auto& sec = doc[section];
      if (sec.is_null()) sec = json::object();
      sec[key] = std::move(value);
    };
    if (intersections) put("geometry", "intersections", *intersections);
    if (wait_value) put("econ", "wait_time_value", *wait_value);
    if (delay_mode) put("solver", "delay_volume_mode", *delay_mode);
    if (split_rule) put("solver", "split_rule", *split_rule);
    if (frequency_cap) put("solver", "frequency_cap", *frequency_cap);
    if (grid_cells) put("solver", "grid_cells", *grid_cells);
    if (solver.empty()) doc.erase("solver");
    return scenario_from_json(doc);
  }

  static json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      return json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw ParseError("scenario parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
  }
};

inline std::vector<Policy> parse_policy_list(const std::vector<std::string>& names) {
  std::vector<Policy> out;
  for (const auto& n : names) {
    const Policy p = parse_policy(n);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  if (out.empty()) throw ValidationError("allowed", "need at least one policy");
  return out;
}

/// Inputs with no sourced value; echoed so every run states what it assumed.
inline json assumed_defaults(const Scenario& s) {
  return {{"geometry.intersections", s.geometry.intersections},
          {"econ.wait_time_value", s.econ.wait_time_value},
          {"note", "intersection count and waiting value of time have no sourced "
                   "value; both are configurable"}};
}

struct Manifest {
  json doc;

  Manifest(const std::vector<std::string>& argv, const std::string& command,
           std::chrono::system_clock::time_point started) {
    doc["manifest_schema"] = kManifestSchema;
    doc["artifact"] = "corridor";
    doc["version"] = CORRIDOR_VERSION;
    doc["command"] = command;
    doc["command_line"] = argv;
    doc["started_utc"] = utc_stamp(started, false);
    doc["seeds"] = json::array();
  }

  void scenario(const Scenario& s) {
    doc["scenario"] = to_json(s);
    doc["scenario_hash"] = scenario_hash(s);
    doc["solver"] = to_json(s)["solver"];
    doc["assumed_defaults"] = assumed_defaults(s);
  }

  std::string finish(const std::vector<std::string>& files) {
    doc["files"] = files;
    doc["finished_utc"] = utc_stamp(std::chrono::system_clock::now(), false);
    return doc.dump(2) + "\n";
  }
};

inline json ou_json(const OUParams& p, double horizon, double dt, double start_clock) {
  return {{"reversion_rate", p.reversion_rate},
          {"long_run_level", p.long_run_level},
          {"volatility", p.volatility},
          {"initial_q0", p.initial_q0},
          {"horizon_hours", horizon},
          {"step_hours", dt},
          {"start_clock", start_clock},
          {"drift_coefficient", "v * long_run_level"},
          {"floor_q0", SimulationDefaults::floor_q0},
          {"provenance", "assumed defaults; not calibrated to observed demand"}};
}

inline std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream out;
  out << csv_preamble("clock_time HH:MM; t_hours h; q0 pax/hr/mi; seed=" + std::to_string(t.seed));
  out << "clock_time,t_hours,q0\n";
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    out << clock_label(t.clock(k)) << ',' << num(t.t_hours(k)) << ',' << num(t.values[k]) << '\n';
  }
  return out.str();
}

/// Reads a trajectory CSV as written by trajectory_csv.
inline Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory file '" + path + "'");
  Trajectory t;
  std::vector<double> times;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("clock_time,t_hours,q0", 0) != 0) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": expected header clock_time,t_hours,q0");
      }
      header_seen = true;
      continue;
    }
    std::stringstream row(line);
    std::string clock, th, q;
    if (!std::getline(row, clock, ',') || !std::getline(row, th, ',') || !std::getline(row, q)) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected three columns");
    }
    try {
      if (times.empty()) {
        const auto colon = clock.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("clock");
        t.t0_clock = std::stod(clock.substr(0, colon)) + std::stod(clock.substr(colon + 1)) / 60.0;
      }
      times.push_back(std::stod(th));
      t.values.push_back(std::stod(q));
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": malformed number");
    }
    if (!(t.values.back() > 0.0)) {
      throw ValidationError("trajectory", "q0 must be > 0 at line " + std::to_string(line_no));
    }
  }
  if (t.values.empty()) throw ParseError(path + ": no samples");
  if (times.size() >= 2) {
    t.dt = times[1] - times[0];
    if (!(t.dt > 0.0)) throw ValidationError("trajectory", "t_hours must increase");
  }
  t.t0_clock -= times.front();
  return t;
}

inline std::string breakdown_header() {
  return "q0,policy,total,bus_user,bus_operator,auto_user,signal,R_star,F_star";
}

inline std::string breakdown_row(double q0, Policy p, const CostBreakdown& b, double r, double f) {
  std::ostringstream out;
  out << num(q0) << ',' << to_string(p) << ',' << num(b.total) << ',' << num(b.bus_user) << ','
      << num(b.bus_operator) << ',' << num(b.auto_user) << ',' << num(b.signal) << ',' << num(r)
      << ',' << num(f);
  return out.str();
}

inline std::string timetable_text(const Schedule& s) {
  std::ostringstream out;
  out << std::left << std::setw(6) << "No." << std::setw(12) << "Entry time" << std::setw(12)
      << "Exit time" << "Policy\n";
  int k = 1;
  for (const auto& e : s.entries) {
    out << std::left << std::setw(6) << k++ << std::setw(12) << clock_label(e.t_entry)
        << std::setw(12) << clock_label(e.t_exit) << to_string(e.policy) << '\n';
  }
  return out.str();
}

}  // namespace detail

/// Parses and executes one command. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  using namespace detail;
  const auto started = std::chrono::system_clock::now();
  std::vector<std::string> args(argv, argv + argc);

  CLI::App app{"Corridor lane-policy cost engine"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_root = "runs";
  std::string out_dir;
  app.add_option("--runs-root", out_root, "Parent directory for default run directories");

  // cost
  auto* cost = app.add_subcommand("cost", "Cost breakdown for one policy at one demand");
  ScenarioOptions cost_s;
  cost_s.attach(*cost);
  std::string cost_policy;
  double cost_q0 = 0.0;
  std::optional<double> cost_r, cost_f;
  cost->add_option("--policy", cost_policy, "mtp, eblp or hovlp")->required();
  cost->add_option("--q0", cost_q0, "CBD demand density, pax/hr/mi")->required();
  cost->add_option("--R", cost_r, "Auto share; optimized when omitted");
  cost->add_option("--F", cost_f, "Bus frequency, buses/hr; optimized when omitted");
  cost->add_option("--out", out_dir, "Run directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Cost curves, policy regions and thresholds");
  ScenarioOptions sweep_s;
  sweep_s.attach(*sweep);
  double sweep_lo = 200.0, sweep_hi = 2500.0;
  int sweep_n = 47;
  std::vector<double> capacities;
  sweep->add_option("--q0-lo", sweep_lo, "Lowest demand density");
  sweep->add_option("--q0-hi", sweep_hi, "Highest demand density");
  sweep->add_option("--n", sweep_n, "Samples per curve (>= 2)");
  sweep->add_option("--capacities", capacities, "Lane capacities to repeat the sweep for")
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "Run directory");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Seeded demand trajectories");
  OUParams ou;
  double horizon = SimulationDefaults::horizon_hours;
  double dt_minutes = 60.0 * SimulationDefaults::step_hours;
  double start_clock = SimulationDefaults::start_clock;
  int sim_n = 10;
  std::uint64_t seed = 1;
  auto attach_ou = [&](CLI::App& a) {
    a.add_option("--v", ou.reversion_rate, "Mean-reversion rate, 1/hr");
    a.add_option("--w-bar", ou.long_run_level, "Long-run demand level, pax/hr/mi");
    a.add_option("--sigma", ou.volatility, "Volatility");
    a.add_option("--q0-init", ou.initial_q0, "Initial demand, pax/hr/mi");
    a.add_option("--horizon", horizon, "Horizon, hours");
    a.add_option("--dt-minutes", dt_minutes, "Step, minutes");
    a.add_option("--start-clock", start_clock, "Clock time of the first sample, hours");
    a.add_option("--seed", seed, "Seed (ensembles use seed, seed+1, ...)");
  };
  attach_ou(*sim);
  sim->add_option("--n", sim_n, "Number of trajectories");
  sim->add_option("--out", out_dir, "Run directory");

  // schedule
  auto* sched = app.add_subcommand("schedule", "Policy timetable over a demand trajectory");
  ScenarioOptions sched_s;
  sched_s.attach(*sched);
  attach_ou(*sched);
  std::string traj_file;
  std::vector<std::string> allowed_names{"mtp", "eblp", "hovlp"};
  double min_dwell = 0.0;
  sched->add_option("--trajectory", traj_file, "Trajectory CSV instead of simulating");
  sched->add_option("--allowed", allowed_names, "Allowed policies")->delimiter(',');
  sched->add_option("--min-dwell", min_dwell, "Minimum run length, minutes");
  sched->add_option("--out", out_dir, "Run directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : validation;
  }

  try {
    if (*cost) {
      const Scenario s = cost_s.build();
      const Policy p = parse_policy(cost_policy);
      if (!std::isfinite(cost_q0) || cost_q0 < 0.0) {
        throw ValidationError("q0", "demand density must be >= 0");
      }
      double r = 0.0, f = 0.0;
      CostBreakdown b;
      json extra;
      if (cost_r && cost_f) {
        r = *cost_r;
        f = *cost_f;
        b = cost_breakdown(s, p, cost_q0, r, f);
      } else if (cost_r) {
        r = *cost_r;
        const auto fo = optimize_frequency(s, p, cost_q0, r);
        f = fo.frequency;
        b = cost_breakdown(s, p, cost_q0, r, f);
      } else if (cost_f) {
        throw ValidationError("F", "--F requires --R");
      } else {
        const PolicyOptimum o = optimize_policy(s, p, cost_q0);
        r = o.R_star;
        f = o.F_star;
        b = o.breakdown;
        extra = {{"constraint_binding", o.constraint_binding},
                 {"at_frequency_cap", o.at_frequency_cap},
                 {"foc_residual", o.foc_residual},
                 {"equilibrium_gap", o.equilibrium_gap.applicable ? json(o.equilibrium_gap.abs_gap)
                                                                  : json(nullptr)}};
      }
      const auto path = out_dir.empty() ? default_run_path(out_root, "cost", started) : std::filesystem::path(out_dir);
      RunDirectory dir(path);
      Manifest m(args, "cost", started);
      m.scenario(s);
      std::ostringstream csv;
      csv << csv_preamble("q0 pax/hr/mi; costs $/hr; R_star share; F_star buses/hr")
          << breakdown_header() << ",min_frequency\n"
          << breakdown_row(cost_q0, p, b, r, f) << ',' << num(min_frequency(s, cost_q0, r)) << '\n';
      dir.write("breakdown.csv", csv.str());
      if (!extra.is_null()) m.doc["diagnostics"] = extra;
      std::vector<std::string> files = dir.files();
      dir.write("manifest.json", m.finish(files));
      dir.commit();

      out << "policy        " << to_string(p) << "\n"
          << "q0            " << fixed(cost_q0, 1) << " pax/hr/mi\n"
          << "R             " << fixed(r, 4) << "\n"
          << "F             " << fixed(f, 2) << " buses/hr\n"
          << "bus_user      " << fixed(b.bus_user, 2) << " $/hr\n"
          << "bus_operator  " << fixed(b.bus_operator, 2) << " $/hr\n"
          << "auto_user     " << fixed(b.auto_user, 2) << " $/hr\n"
          << "signal        " << fixed(b.signal, 2) << " $/hr\n"
          << "total         " << fixed(b.total, 2) << " $/hr\n"
          << "run directory " << dir.path().string() << "\n";
      return ok;
    }

    if (*sweep) {
      const Scenario base = sweep_s.build();
      if (sweep_n < 2) throw ValidationError("n", "a sweep needs at least 2 samples");
      if (!(sweep_lo > 0.0) || !(sweep_hi > sweep_lo)) {
        throw ValidationError("q0_range", "need 0 < q0-lo < q0-hi");
      }
      std::vector<double> caps = capacities;
      if (caps.empty()) caps.push_back(base.geometry.lane_capacity);
      const auto path = out_dir.empty() ? default_run_path(out_root, "sweep", started) : std::filesystem::path(out_dir);
      RunDirectory dir(path);
      Manifest m(args, "sweep", started);
      m.scenario(base);
      m.doc["lane_capacities"] = caps;

      std::ostringstream curves, regions, thresholds;
      const std::string units = "q0 pax/hr/mi; costs $/hr; R_star share; F_star buses/hr; lane_capacity veh/hr";
      curves << csv_preamble(units) << "lane_capacity," << breakdown_header()
             << ",constraint_binding,status\n";
      regions << csv_preamble("q0 pax/hr/mi; lane_capacity veh/hr")
              << "lane_capacity,q0_from,q0_to,policy\n";
      thresholds << csv_preamble("q0_star pax/hr/mi; lane_capacity veh/hr")
                 << "lane_capacity,first,second,q0_star,cheaper_below,cheaper_above\n";
      const std::pair<Policy, Policy> pairs[] = {
          {Policy::hovlp, Policy::mtp}, {Policy::mtp, Policy::eblp}, {Policy::hovlp, Policy::eblp}};
      for (double c : caps) {
        Scenario s = base;
        s.geometry.lane_capacity = c;
        validate(s);
        for (Policy p : kAllPolicies) {
          const CostCurve curve = cost_curve(s, p, sweep_lo, sweep_hi, sweep_n);
          for (const auto& smp : curve.samples) {
            curves << num(c) << ',';
            if (smp.optimum) {
              const auto& o = *smp.optimum;
              curves << breakdown_row(smp.q0, p, o.breakdown, o.R_star, o.F_star) << ','
                     << (o.constraint_binding ? 1 : 0) << ",ok\n";
            } else {
              curves << num(smp.q0) << ',' << to_string(p) << ",,,,,,,,,\"" << smp.error << "\"\n";
            }
          }
        }
        const RegionAnalysis ra =
            policy_regions(s, sweep_lo, sweep_hi, (sweep_hi - sweep_lo) / (sweep_n - 1));
        for (const auto& r : ra.regions) {
          regions << num(c) << ',' << num(r.q0_from) << ',' << num(r.q0_to) << ','
                  << to_string(r.policy) << '\n';
        }
        for (const auto& [a, b] : pairs) {
          const ThresholdResult t = find_threshold(s, a, b, sweep_lo, sweep_hi);
          thresholds << num(c) << ',' << to_string(a) << ',' << to_string(b) << ','
                     << (t.q0_star ? num(*t.q0_star) : std::string()) << ','
                     << to_string(t.cheaper_below) << ',' << to_string(t.cheaper_above) << '\n';
        }
        out << "lane capacity " << num(c) << ":";
        for (const auto& r : ra.regions) {
          out << ' ' << to_string(r.policy) << '[' << fixed(r.q0_from, 0) << ',' << fixed(r.q0_to, 0)
              << ']';
        }
        out << '\n';
      }
      dir.write("curves.csv", curves.str());
      dir.write("regions.csv", regions.str());
      dir.write("thresholds.csv", thresholds.str());
      std::vector<std::string> files = dir.files();
      dir.write("manifest.json", m.finish(files));
      dir.commit();
      out << "run directory " << dir.path().string() << '\n';
      return ok;
    }

    if (*sim) {
      const double dt = dt_minutes / 60.0;
      const auto ensemble = simulate_ensemble(ou, horizon, dt, sim_n, seed, start_clock);
      const auto path = out_dir.empty() ? default_run_path(out_root, "simulate", started) : std::filesystem::path(out_dir);
      RunDirectory dir(path);
      Manifest m(args, "simulate", started);
      m.doc["ou"] = ou_json(ou, horizon, dt, start_clock);
      json floors = json::object();
      for (const auto& t : ensemble) {
        m.doc["seeds"].push_back(t.seed);
        floors[std::to_string(t.seed)] = t.floor_events;
        std::ostringstream name;
        name << "trajectory_seed" << t.seed << ".csv";
        dir.write(name.str(), trajectory_csv(t));
      }
      m.doc["floor_events"] = floors;
      std::vector<std::string> files = dir.files();
      dir.write("manifest.json", m.finish(files));
      dir.commit();
      out << "wrote " << ensemble.size() << " trajectories to " << dir.path().string() << '\n';
      return ok;
    }

    if (*sched) {
      const Scenario s = sched_s.build();
      const std::vector<Policy> allowed = parse_policy_list(allowed_names);
      Trajectory traj;
      json traj_meta;
      if (!traj_file.empty()) {
        traj = read_trajectory(traj_file);
        traj_meta = {{"source", traj_file}};
      } else {
        // Case-study presets centre the process on their observed demand unless told otherwise.
        if (s.reference_q0 && !sched->count("--w-bar")) ou.long_run_level = *s.reference_q0;
        if (s.reference_q0 && !sched->count("--q0-init")) ou.initial_q0 = *s.reference_q0;
        const double dt = dt_minutes / 60.0;
        traj = simulate(ou, horizon, dt, seed, start_clock);
        traj_meta = {{"source", "simulated"}, {"seed", seed}, {"floor_events", traj.floor_events},
                     {"ou", ou_json(ou, horizon, dt, start_clock)}};
      }
      OptimumCache cache(s);
      const StepTable table = evaluate_trajectory(cache, traj, allowed);
      const Schedule plan = build_schedule(table, min_dwell);

      const auto path = out_dir.empty() ? default_run_path(out_root, "schedule", started) : std::filesystem::path(out_dir);
      RunDirectory dir(path);
      Manifest m(args, "schedule", started);
      m.scenario(s);
      if (traj_file.empty()) m.doc["seeds"].push_back(seed);
      m.doc["trajectory"] = traj_meta;
      m.doc["min_dwell_minutes"] = min_dwell;
      m.doc["cache"] = {{"bucket_width", 1.0},
                        {"max_quantization", table.max_quantization},
                        {"distinct_optima", cache.size()}};

      if (traj_file.empty()) dir.write("trajectory.csv", trajectory_csv(traj));
      std::ostringstream steps;
      steps << csv_preamble("clock_time HH:MM; q0 pax/hr/mi; totals $/hr")
            << "clock_time,t_hours,q0,q0_bucket,MTP,EBLP,HOVLP,best\n";
      for (const auto& r : table.steps) {
        steps << clock_label(table.t0_clock + r.t_hours) << ',' << num(r.t_hours) << ','
              << num(r.q0) << ',' << num(r.bucket_q0) << ',' << num(r.total[0]) << ','
              << num(r.total[1]) << ',' << num(r.total[2]) << ',' << to_string(r.best) << '\n';
      }
      dir.write("steps.csv", steps.str());
      std::ostringstream sc;
      sc << csv_preamble("entry/exit HH:MM; duration minutes; cost $")
         << "entry,exit,policy,duration_min,cost\n";
      for (const auto& e : plan.entries) {
        sc << clock_label(e.t_entry) << ',' << clock_label(e.t_exit) << ',' << to_string(e.policy)
           << ',' << num(std::round((e.t_exit - e.t_entry) * 60.0)) << ',' << num(e.cost) << '\n';
      }
      dir.write("schedule.csv", sc.str());
      const std::string timetable = timetable_text(plan);
      dir.write("timetable.txt", timetable);

      json summary;
      summary["units"] = "cumulative costs in $ over the horizon; savings as fractions";
      summary["combined_cumulative"] = plan.combined_cumulative;
      for (const auto& [p, w] : plan.per_policy_cumulative) {
        summary["per_policy_cumulative"][std::string(to_string(p))] = w;
      }
      for (const auto& [p, z] : plan.savings_vs) {
        summary["savings_vs"][std::string(to_string(p))] = z;
      }
      summary["entries"] = plan.entries.size();
      summary["reference_savings"] = {
          {"experiment", {{"MTP", 0.120}, {"EBLP", 0.053}, {"HOVLP", 0.425}}},
          {"seattle_i5_vs_MTP", 0.322},
          {"seattle_sr99_vs_MTP", 0.279},
          {"note", "reference figures from a trajectory that is not available; context only"}};
      dir.write("summary.json", summary.dump(2) + "\n");
      std::vector<std::string> files = dir.files();
      dir.write("manifest.json", m.finish(files));
      dir.commit();

      out << timetable << '\n';
      for (const auto& [p, z] : plan.savings_vs) {
        out << "saving vs " << std::left << std::setw(6) << to_string(p) << fixed(100.0 * z, 2)
            << "%\n";
      }
      out << "run directory " << dir.path().string() << '\n';
      return ok;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return validation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return validation;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return infeasible;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return io;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return io;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return validation;
  }
  return ok;
}

}  // namespace corridor::cli
