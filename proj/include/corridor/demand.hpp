#pragma once

// Linear many-to-one demand toward the CBD at x = 0 and the occupancy split
// of auto travellers.

#include <cmath>

#include "corridor/error.hpp"
#include "corridor/scenario.hpp"

namespace corridor {

struct DemandField {
  double q0 = 0.0;          ///< pax/hr/mi at the CBD
  double length = 30.0;     ///< A, miles
  double auto_share = 0.0;  ///< R
};

enum class DemandMode { automobile, bus, total };

namespace detail {

inline void require_on_corridor(const DemandField& f, double x) {
  const double slack = 1e-12 * f.length;
  if (!(x >= -slack && x <= f.length + slack)) {
    throw NumericDomainError("position " + std::to_string(x) + " mi lies outside the corridor [0, " +
                             std::to_string(f.length) + "]");
  }
}

inline double share_of(const DemandField& f, DemandMode mode) {
  switch (mode) {
    case DemandMode::automobile: return f.auto_share;
    case DemandMode::bus: return 1.0 - f.auto_share;
    case DemandMode::total: return 1.0;
  }
  return 1.0;
}

}  // namespace detail

/// q(x) = q0 (1 - x/A).
inline double density(const DemandField& f, double x) {
  detail::require_on_corridor(f, x);
  return f.q0 * (1.0 - x / f.length);
}

inline double density(const DemandField& f, DemandMode mode, double x) {
  return detail::share_of(f, mode) * density(f, x);
}

/// Demand boarding between x and the boundary: share * q0 (A - x)^2 / (2A).
inline double cumulative_demand(const DemandField& f, DemandMode mode, double x) {
  detail::require_on_corridor(f, x);
  const double rest = f.length - x;
  return detail::share_of(f, mode) * f.q0 * rest * rest / (2.0 * f.length);
}

struct OccupancySplit {
  double low_share = 1.0;           ///< q_l, traveller fraction in low-occupancy autos
  double high_share = 0.0;          ///< q_h
  double average_occupancy = 1.0;   ///< O_a, pax/veh
};

inline OccupancySplit occupancy_split(const OccupancyParams& occ) {
  const double mu = occ.low_occupancy_share;
  const double lo = occ.low_occupancy;
  const double hi = occ.high_occupancy;
  OccupancySplit s;
  s.low_share = mu * lo / (mu * lo + (1.0 - mu) * hi);
  s.high_share = 1.0 - s.low_share;
  s.average_occupancy = lo * hi / (hi * s.low_share + lo * s.high_share);
  return s;
}

/// Auto-equivalent volume at x: Q_a(x)/O_a + K F.
inline double total_volume(const DemandField& f, double average_occupancy, double bus_equivalent,
                           double frequency, double x) {
  return cumulative_demand(f, DemandMode::automobile, x) / average_occupancy +
         bus_equivalent * frequency;
}

}  // namespace corridor
