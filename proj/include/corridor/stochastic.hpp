#pragma once

// Seeded mean-reverting simulation of the CBD demand density.
//
// Stream mapping: member i of an ensemble uses std::mt19937_64 seeded with
// base_seed + i. Uniforms take the top 53 bits of each draw; normals come
// from the cosine branch of Box-Muller, two uniforms per normal. Both steps
// are spelled out here so trajectories do not depend on the standard
// library's distribution implementations.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "corridor/error.hpp"

namespace corridor {

struct OUParams {
  double reversion_rate = 1.5;    ///< v, 1/hr
  double long_run_level = 1500.0; ///< w_bar, pax/hr/mi
  double volatility = 0.3;        ///< sigma
  double initial_q0 = 1000.0;     ///< pax/hr/mi

  bool operator==(const OUParams&) const = default;
};

/// Values the simulator falls back on when nothing else is given.
struct SimulationDefaults {
  static constexpr double horizon_hours = 12.0;
  static constexpr double step_hours = 1.0 / 60.0;
  static constexpr double start_clock = 7.0;  ///< 7:00
  static constexpr double floor_q0 = 1.0;
};

struct Trajectory {
  double t0_clock = SimulationDefaults::start_clock;  ///< hours after midnight
  double dt = SimulationDefaults::step_hours;
  std::vector<double> values;
  std::uint64_t seed = 0;
  int floor_events = 0;

  double t_hours(std::size_t k) const { return static_cast<double>(k) * dt; }
  double clock(std::size_t k) const { return t0_clock + t_hours(k); }
};

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1].
  double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline void validate(const OUParams& p) {
  if (!std::isfinite(p.reversion_rate) || p.reversion_rate < 0.0) {
    throw ValidationError("ou.reversion_rate", "v must be >= 0");
  }
  if (!std::isfinite(p.volatility) || p.volatility < 0.0) {
    throw ValidationError("ou.volatility", "sigma must be >= 0");
  }
  if (!std::isfinite(p.long_run_level) || p.long_run_level <= 0.0) {
    throw ValidationError("ou.long_run_level", "w_bar must be > 0");
  }
  if (!std::isfinite(p.initial_q0) || p.initial_q0 <= 0.0) {
    throw ValidationError("ou.initial_q0", "initial demand must be > 0");
  }
}

/// Number of steps that fit the horizon, tolerant to round-off in horizon/dt.
inline std::size_t step_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
}

/// One step of the exponential-form solution over dt with Wiener increment dw.
inline double ou_step(const OUParams& p, double q, double dt, double dw) {
  const double k = p.reversion_rate + 0.5 * p.volatility * p.volatility;
  const double relax = k > 0.0 ? -std::expm1(-k * dt) / k : dt;
  return q * std::exp(-k * dt + p.volatility * dw) +
         p.reversion_rate * p.long_run_level * relax;
}

inline Trajectory simulate(const OUParams& params, double horizon, double dt, std::uint64_t seed,
                           double start_clock = SimulationDefaults::start_clock) {
  validate(params);
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon", "must be > 0");
  if (!(dt > 0.0) || !(dt <= horizon)) throw ValidationError("dt", "need 0 < dt <= horizon");
  Trajectory traj;
  traj.t0_clock = start_clock;
  traj.dt = dt;
  traj.seed = seed;
  const std::size_t steps = step_count(horizon, dt);
  traj.values.reserve(steps + 1);
  traj.values.push_back(params.initial_q0);
  GaussianStream noise(seed);
  const double sd = std::sqrt(dt);
  double q = params.initial_q0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double dw = params.volatility > 0.0 ? sd * noise.normal() : 0.0;
    q = ou_step(params, q, dt, dw);
    if (q < SimulationDefaults::floor_q0) {
      q = SimulationDefaults::floor_q0;
      ++traj.floor_events;
    }
    traj.values.push_back(q);
  }
  return traj;
}

inline std::vector<Trajectory> simulate_ensemble(const OUParams& params, double horizon, double dt,
                                                 int n, std::uint64_t base_seed,
                                                 double start_clock = SimulationDefaults::start_clock) {
  if (n < 1) throw ValidationError("n", "ensemble needs at least one member");
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.push_back(simulate(params, horizon, dt, base_seed + static_cast<std::uint64_t>(i), start_clock));
  }
  return out;
}

/// Noise-free path at time t: w_bar v/k + (q_init - w_bar v/k) e^{-k t}.
inline double relaxation_path(const OUParams& p, double t) {
  const double k = p.reversion_rate + 0.5 * p.volatility * p.volatility;
  if (k == 0.0) return p.initial_q0;
  const double level = p.long_run_level * p.reversion_rate / k;
  return level + (p.initial_q0 - level) * std::exp(-k * t);
}

/// "HH:MM" for hours after midnight, rounded to the nearest minute.
inline std::string clock_label(double hours) {
  long minutes = std::lround(hours * 60.0);
  const long h = minutes / 60;
  minutes %= 60;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02ld:%02ld", h, minutes);
  return buf;
}

}  // namespace corridor
