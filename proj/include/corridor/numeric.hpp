#pragma once

// Deterministic numerical primitives shared by the corridor models:
// composite Simpson quadrature on a fixed corridor grid, bracketed
// bisection, and coarse-to-fine lattice minimization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "corridor/error.hpp"

namespace corridor {

/// x^e with fast paths for the small integer exponents the cost model uses
/// (BPR beta = 4, waiting-time exponent = 2).
inline double power(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 3.0) return x * x * x;
  if (e == 4.0) {
    const double s = x * x;
    return s * s;
  }
  if (e == 0.0) return 1.0;
  return std::pow(x, e);
}

/// Uniform discretization of [0, length] into an even number of cells.
class CorridorGrid {
 public:
  CorridorGrid(double length, int cells) : length_(length), cells_(cells) {
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw NumericDomainError("corridor grid length must be positive and finite");
    }
    if (cells <= 0 || cells % 2 != 0) {
      throw NumericDomainError("corridor grid needs a positive even cell count, got " +
                               std::to_string(cells));
    }
  }

  double length() const noexcept { return length_; }
  int cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(cells_) + 1; }
  double step() const noexcept { return length_ / cells_; }

  /// Position of node k. Uses the same expression as integrate() so that
  /// both routes see bitwise identical abscissae.
  double node(std::size_t k) const noexcept {
    return 0.0 + (length_ - 0.0) * static_cast<double>(k) / cells_;
  }

  std::vector<double> nodes() const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = node(k);
    return out;
  }

 private:
  double length_;
  int cells_;
};

namespace detail {

inline void require_finite(double value, double x, std::size_t k) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "non-finite integrand value " << value << " at node " << k << " (x = " << x << ")";
    throw NumericDomainError(msg.str());
  }
}

}  // namespace detail

/// Composite Simpson sum over tabulated, equally spaced values. `values.size()` must be odd.
inline double simpson(std::span<const double> values, double h) {
  if (values.size() < 3 || values.size() % 2 == 0) {
    throw NumericDomainError("Simpson rule needs an odd number (>= 3) of samples");
  }
  double total = 0.0;
  for (std::size_t k = 2; k < values.size(); k += 2) {
    total += h / 3.0 * (values[k - 2] + 4.0 * values[k - 1] + values[k]);
  }
  return total;
}

/// Running integral from node 0 over tabulated values.
///
/// Even nodes carry the composite Simpson partial sums (so the last entry
/// equals simpson() bit for bit); odd nodes add a trapezoid half-step onto
/// the preceding even node, which keeps the result non-decreasing for
/// non-negative integrands.
inline std::vector<double> cumulative_simpson(std::span<const double> values, double h) {
  if (values.size() < 3 || values.size() % 2 == 0) {
    throw NumericDomainError("Simpson rule needs an odd number (>= 3) of samples");
  }
  std::vector<double> out(values.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 2; k < values.size(); k += 2) {
    const double f0 = values[k - 2], f1 = values[k - 1], f2 = values[k];
    const double panel = h / 3.0 * (f0 + 4.0 * f1 + f2);
    // Midpanel node: integral of the panel's interpolating parabola over its
    // first half, kept between 0 and the panel when the samples share a sign
    // so that the running integral of a one-signed integrand stays monotone.
    double half = h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
    if (f0 >= 0.0 && f1 >= 0.0 && f2 >= 0.0) half = std::clamp(half, 0.0, panel);
    if (f0 <= 0.0 && f1 <= 0.0 && f2 <= 0.0) half = std::clamp(half, panel, 0.0);
    out[k - 1] = total + half;
    total += panel;
    out[k] = total;
  }
  return out;
}

/// Samples f at every grid node, rejecting non-finite values.
template <class F>
std::vector<double> tabulate(F&& f, const CorridorGrid& grid) {
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = grid.node(k);
    values[k] = f(x);
    detail::require_finite(values[k], x, k);
  }
  return values;
}

/// Composite Simpson approximation of the integral of f over [a, b].
///
/// The panel width is the grid step rounded so that [a, b] holds an even
/// number of panels; over [0, A] the abscissae coincide with the grid nodes.
template <class F>
double integrate(F&& f, double a, double b, const CorridorGrid& grid) {
  if (!(a <= b)) throw NumericDomainError("integrate: lower limit exceeds upper limit");
  const double slack = 1e-9 * grid.length();
  if (a < -slack || b > grid.length() + slack) {
    throw NumericDomainError("integrate: limits outside the corridor");
  }
  if (a == b) return 0.0;
  int panels = static_cast<int>(std::ceil((b - a) / grid.step() - 1e-9));
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  std::vector<double> values(static_cast<std::size_t>(panels) + 1);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = a + (b - a) * static_cast<double>(k) / panels;
    values[k] = f(x);
    detail::require_finite(values[k], x, k);
  }
  return simpson(values, (b - a) / panels);
}

/// Integral of f from 0 to each grid node.
template <class F>
std::vector<double> cumulative_integral(F&& f, const CorridorGrid& grid) {
  const auto values = tabulate(std::forward<F>(f), grid);
  return cumulative_simpson(values, (grid.length() - 0.0) / grid.cells());
}

/// Bisection root of g on [lo, hi] to interval width `tol`.
/// The bracket may be given in either order.
template <class G>
double find_root(G&& g, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw NumericDomainError("find_root: tolerance must be positive");
  if (lo > hi) std::swap(lo, hi);
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (!std::isfinite(g_lo) || !std::isfinite(g_hi)) {
    throw NumericDomainError("find_root: non-finite value at bracket end");
  }
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "]: g(lo) = " << g_lo
        << ", g(hi) = " << g_hi;
    throw BracketError(msg.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (!std::isfinite(g_mid)) throw NumericDomainError("find_root: non-finite value inside bracket");
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct GridSearch {
  double coarse_step = 1.0;
  double refine_factor = 10.0;
  int rounds = 1;
  /// Stop the coarse pass after this many consecutive non-improving lattice
  /// points. 0 scans the whole lattice.
  int patience = 0;
};

struct GridMinResult {
  double argmin = 0.0;
  double min = 0.0;
  int evaluations = 0;
  std::vector<double> skipped;  ///< lattice points where f was not finite
};

/// Lattice minimization: scan lo, lo + step, ... <= hi, then re-grid around
/// the incumbent with the step divided by `refine_factor` each round.
/// Ties go to the smallest argument.
template <class F>
GridMinResult grid_min(F&& f, double lo, double hi, const GridSearch& search) {
  if (!(lo < hi)) throw NumericDomainError("grid_min: empty interval");
  if (!(search.coarse_step > 0.0)) throw NumericDomainError("grid_min: step must be positive");
  if (search.rounds > 0 && !(search.refine_factor > 1.0)) {
    throw NumericDomainError("grid_min: refine factor must exceed 1");
  }

  GridMinResult result;
  bool found = false;
  auto consider = [&](double x) {
    const double v = f(x);
    ++result.evaluations;
    if (!std::isfinite(v)) {
      result.skipped.push_back(x);
      return false;
    }
    if (!found || v < result.min || (v == result.min && x < result.argmin)) {
      const bool improved = !found || v < result.min;
      result.argmin = x;
      result.min = v;
      found = true;
      return improved;
    }
    return false;
  };

  const double slack = 1e-9 * search.coarse_step;
  int stale = 0;
  for (long k = 0;; ++k) {
    double x = lo + static_cast<double>(k) * search.coarse_step;
    if (x > hi + slack) break;
    if (x > hi) x = hi;
    if (consider(x)) {
      stale = 0;
    } else if (found && search.patience > 0 && ++stale >= search.patience) {
      break;
    }
  }
  if (!found) throw NumericDomainError("grid_min: f is non-finite at every lattice point");

  double step = search.coarse_step;
  for (int round = 0; round < search.rounds; ++round) {
    const double fine = step / search.refine_factor;
    const long reach = std::lround(search.refine_factor);
    const double centre = result.argmin;
    for (long j = -reach; j <= reach; ++j) {
      if (j == 0) continue;
      const double x = centre + static_cast<double>(j) * fine;
      if (x < lo - 1e-12 * std::abs(lo) || x > hi + 1e-12 * std::abs(hi)) continue;
      consider(std::clamp(x, lo, hi));
    }
    step = fine;
  }
  return result;
}

}  // namespace corridor
