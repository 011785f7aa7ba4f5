#pragma once

// First-order Godunov finite-volume solver for u_t + (u^2/2)_x = 0 on
// [-L, L] with outflow boundaries. Serves as an independent check of the
// characteristics solution before blow-up.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "burgers_ip/errors.hpp"
#include "burgers_ip/flow.hpp"
#include "burgers_ip/peakon.hpp"

namespace burgers {

struct FvState {
  double half_width = 0.0;
  std::vector<double> cells;
  double time = 0.0;
  double cfl = 0.5;
  /// Time-integrated net flux through the two boundaries, so that
  /// dx * sum(cells) + outflow is invariant.
  double outflow = 0.0;
  std::size_t steps = 0;

  std::size_t size() const noexcept { return cells.size(); }
  double dx() const noexcept {
    return 2.0 * half_width / static_cast<double>(cells.size());
  }
  double center(std::size_t i) const noexcept {
    return -half_width + (static_cast<double>(i) + 0.5) * dx();
  }
  double mass() const noexcept {
    double m = 0.0;
    for (double c : cells) m += c;
    return m * dx();
  }
};

/// Exact Riemann flux for f(u) = u^2 / 2.
inline double godunov_flux(double left, double right) noexcept {
  if (left <= right) {
    // Minimum of f over [left, right].
    if (left > 0.0) return 0.5 * left * left;
    if (right < 0.0) return 0.5 * right * right;
    return 0.0;
  }
  return 0.5 * std::max(left * left, right * right);
}

/// State with prescribed cell averages, for generic initial data.
inline FvState fv_from_averages(double half_width, std::vector<double> averages,
                                double cfl, double time = 0.0) {
  if (!(half_width > 0.0)) throw DomainError("half_width must be positive");
  if (averages.size() < 2) throw DomainError("need at least two cells");
  if (!(cfl > 0.0 && cfl < 1.0)) {
    throw DomainError("cfl must lie in (0, 1), got " + std::to_string(cfl));
  }
  FvState s;
  s.half_width = half_width;
  s.cells = std::move(averages);
  s.cfl = cfl;
  s.time = time;
  return s;
}

/// Cell averages of the peakon data from its exact antiderivative.
inline FvState fv_init(const PeakonPair& data, double half_width,
                       std::size_t n_cells, double cfl) {
  if (!(half_width >= 10.0)) {
    throw DomainError("domain half-width L must be >= 10, got " +
                      std::to_string(half_width));
  }
  if (n_cells < 16) {
    throw DomainError("n_cells must be >= 16, got " + std::to_string(n_cells));
  }
  std::vector<double> cells(n_cells);
  const double dx = 2.0 * half_width / static_cast<double>(n_cells);
  double left = data.antiderivative(-half_width);
  for (std::size_t i = 0; i < n_cells; ++i) {
    const double x_right = -half_width + static_cast<double>(i + 1) * dx;
    const double right = data.antiderivative(x_right);
    cells[i] = (right - left) / dx;
    left = right;
  }
  return fv_from_averages(half_width, std::move(cells), cfl);
}

namespace detail {

inline double max_speed(const std::vector<double>& cells) {
  double m = 0.0;
  for (double c : cells) m = std::max(m, std::fabs(c));
  return m;
}

// One forward-Euler update with time step min(cfl dx / max|u|, max_dt).
// Sets `clipped` when the step was limited by max_dt.
inline FvState fv_advance(const FvState& state, double max_dt,
                          bool& clipped) {
  FvState next = state;
  const double speed = max_speed(state.cells);
  const double dx = state.dx();
  double dt = speed > 0.0 ? state.cfl * dx / speed
                          : std::numeric_limits<double>::infinity();
  clipped = dt >= max_dt;
  dt = std::min(dt, max_dt);
  if (!(dt > 0.0) || std::isinf(dt)) return next;
  const auto& u = state.cells;
  const std::size_t n = u.size();
  std::vector<double> flux(n + 1);
  // Outflow: ghost cells copy the boundary values.
  flux[0] = godunov_flux(u[0], u[0]);
  for (std::size_t i = 1; i < n; ++i) flux[i] = godunov_flux(u[i - 1], u[i]);
  flux[n] = godunov_flux(u[n - 1], u[n - 1]);
  const double ratio = dt / dx;
  for (std::size_t i = 0; i < n; ++i) {
    next.cells[i] = u[i] - ratio * (flux[i + 1] - flux[i]);
  }
  next.outflow += dt * (flux[n] - flux[0]);
  next.time = state.time + dt;
  ++next.steps;
  return next;
}

}  // namespace detail

/// One CFL-limited step.
inline FvState fv_step(const FvState& state) {
  bool clipped = false;
  return detail::fv_advance(state, std::numeric_limits<double>::infinity(),
                            clipped);
}

/// Steps until `t_target`, clipping the last step to land on it exactly.
inline FvState fv_solve_to(FvState state, double t_target) {
  if (!(t_target >= state.time)) {
    throw DomainError("t_target precedes the current state time");
  }
  while (state.time < t_target) {
    bool clipped = false;
    FvState next = detail::fv_advance(state, t_target - state.time, clipped);
    if (clipped) next.time = t_target;
    state = std::move(next);
  }
  return state;
}

struct FvComparison {
  double l1_error = 0.0;
  double linf_error = 0.0;
  /// dx * sum |exact|, for relative errors.
  double l1_exact = 0.0;

  double relative_l1() const noexcept {
    return l1_exact > 0.0 ? l1_error / l1_exact : l1_error;
  }
};

/// Cell averages against the exact solution sampled at cell centers.
inline FvComparison compare_with_exact(const FvState& state,
                                       const CharacteristicSolution& sol) {
  sol.check_time(state.time);
  std::vector<double> centers(state.size());
  for (std::size_t i = 0; i < centers.size(); ++i) centers[i] = state.center(i);
  const auto exact = sol.sample_profile(state.time, centers);
  FvComparison c;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double diff = std::fabs(state.cells[i] - exact[i]);
    c.l1_error += diff;
    c.linf_error = std::max(c.linf_error, diff);
    c.l1_exact += std::fabs(exact[i]);
  }
  c.l1_error *= state.dx();
  c.l1_exact *= state.dx();
  return c;
}

}  // namespace burgers
