#pragma once

// Time-dependent integrals of the exact solution. Each is written in
// Lagrangian form on a fixed label domain via y = psi(t, x), dy = psi_x dx:
//   int u(t,y)^2 dy    = int u0(x)^2 (1 + t u0'(x)) dx
//   int u_x(t,y)^2 dy  = int u0'(x)^2 / (1 + t u0'(x)) dx
// All integrands are even in x, so only [0, X] is integrated.

#include <array>
#include <cmath>

#include "burgers_ip/flow.hpp"
#include "burgers_ip/quadrature.hpp"

namespace burgers {

namespace detail {

// Outer-branch amplitude: u0(x) = -+c exp(-|x|) for |x| >= q0.
inline double outer_amplitude(const PeakonPair& d) {
  return 2.0 * d.p0() * std::sinh(d.q0());
}

inline NormReport finish_norm(const NormReport& half_integral, double tail) {
  NormReport r;
  const double sq = 2.0 * half_integral.value;
  r.value = std::sqrt(sq);
  r.error_estimate = sqrt_error(sq, 2.0 * half_integral.error_estimate);
  r.tail_bound = sqrt_error(sq, tail);
  r.evaluations = half_integral.evaluations;
  return r;
}

}  // namespace detail

/// ||u(t)||_{L^2}.
inline NormReport l2_norm_u(const CharacteristicSolution& sol, double t,
                            const QuadratureSpec& spec) {
  sol.check_time(t);
  const PeakonPair& d = sol.data();
  const double width = spec.spatial_half_width;
  const std::array<double, 1> hints = {d.q0()};
  const auto half = integrate_adaptive(
      [&](double x) {
        const double v = d.u0(x);
        return v * v * sol.stretch(t, x);
      },
      0.0, width, spec, hints);
  // Exact value of the two discarded tails.
  const double c = detail::outer_amplitude(d);
  const double tail = c * c * std::exp(-2.0 * width) +
                      2.0 * t * c * c * c * std::exp(-3.0 * width) / 3.0;
  auto r = detail::finish_norm(half, tail);
  r.cutoff = width;
  return r;
}

/// ||u_x(t)||_{L^2}. As t -> T* the integrand develops an integrable
/// singularity at x -> q0^-; a ConvergenceError then means max_depth is too
/// small for the requested proximity to T*.
inline NormReport l2_norm_ux(const CharacteristicSolution& sol, double t,
                             const QuadratureSpec& spec) {
  sol.check_time(t);
  const PeakonPair& d = sol.data();
  const double width = spec.spatial_half_width;
  const std::array<double, 1> hints = {d.q0()};
  const auto half = integrate_adaptive(
      [&](double x) {
        const double v = d.du0(x);
        return v * v / sol.stretch(t, x);
      },
      0.0, width, spec, hints);
  const double c = detail::outer_amplitude(d);
  // Outside the kinks psi_x >= 1, so the tail is below int u0'^2.
  const double tail = c * c * std::exp(-2.0 * width);
  auto r = detail::finish_norm(half, tail);
  r.cutoff = width;
  return r;
}

/// A(t) = int over |y| <= psi(t, q0) of u_x(t, y)^2 dy (not square-rooted).
inline NormReport a_of_t(const CharacteristicSolution& sol, double t,
                         const QuadratureSpec& spec) {
  sol.check_time(t);
  const PeakonPair& d = sol.data();
  auto r = integrate_adaptive(
      [&](double x) {
        const double v = d.du0(x);
        return v * v / sol.stretch(t, x);
      },
      0.0, d.q0(), spec);
  r.value *= 2.0;
  r.error_estimate *= 2.0;
  return r;
}

/// ||u(t)||_{H^1} = sqrt(||u||^2 + ||u_x||^2) in physical space.
inline NormReport h1_norm(const CharacteristicSolution& sol, double t,
                          const QuadratureSpec& spec) {
  const auto u = l2_norm_u(sol, t, spec);
  const auto ux = l2_norm_ux(sol, t, spec);
  NormReport r;
  r.value = std::hypot(u.value, ux.value);
  // Each component error enters at most linearly.
  r.error_estimate = u.error_estimate + ux.error_estimate;
  r.tail_bound = u.tail_bound + ux.tail_bound;
  r.evaluations = u.evaluations + ux.evaluations;
  r.cutoff = u.cutoff;
  return r;
}

}  // namespace burgers
