#pragma once

// Exact classical solution of u_t + u u_x = 0 with peakon-pair data, valid
// up to the gradient blow-up time T*. Characteristics are straight lines
// psi(t, x) = x + t u0(x); everything else follows by inverting psi.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "burgers_ip/errors.hpp"
#include "burgers_ip/peakon.hpp"

namespace burgers {

struct InversionSpec {
  double abs_tol = 1e-12;
  int max_iterations = 200;
};

class CharacteristicSolution {
 public:
  explicit CharacteristicSolution(PeakonPair data, InversionSpec inversion = {})
      : data_(data), tstar_(data.blowup_time()), inversion_(inversion) {
    if (!(inversion.abs_tol > 0.0) || inversion.max_iterations < 1) {
      throw DomainError("inversion tolerance and iteration budget must be positive");
    }
  }

  const PeakonPair& data() const noexcept { return data_; }
  double tstar() const noexcept { return tstar_; }
  const InversionSpec& inversion() const noexcept { return inversion_; }

  double psi(double t, double x) const {
    check_time(t);
    return x + t * data_.u0(x);
  }

  /// d psi / dx = 1 + t u0'(x); `side` picks the branch at x = +-q0.
  double psi_x(double t, double x, Side side = Side::kLeft) const {
    check_time(t);
    return stretch(t, x, side);
  }

  /// 1 + t u0'(x) without the time check. On the inner branch this is
  /// evaluated as (T* - t)/T* + t (u0'(x) - u0'(q0^-)), which keeps full
  /// relative accuracy as t approaches T* near the kinks.
  double stretch(double t, double x, Side side = Side::kLeft) const noexcept {
    const double q0 = data_.q0();
    const double ax = std::fabs(x);
    const bool inner = ax < q0 || (x == q0 && side == Side::kLeft) ||
                       (x == -q0 && side == Side::kRight);
    if (!inner) return 1.0 + t * data_.du0(x, side);
    const double gap = 4.0 * data_.p0() * std::exp(-q0) *
                       std::sinh(0.5 * (q0 + ax)) * std::sinh(0.5 * (q0 - ax));
    return (tstar_ - t) / tstar_ + t * gap;
  }

  /// The unique x with psi(t, x) = y.
  double psi_inv(double t, double y) const {
    check_time(t);
    const double reach = t * data_.sup_abs_u0();
    return invert(t, y, y - reach, y + reach);
  }

  double u(double t, double y) const { return data_.u0(psi_inv(t, y)); }

  /// u_x(t, y) = u0'(x) / (1 + t u0'(x)) with x = psi^{-1}(t, y).
  double u_x(double t, double y, Side side = Side::kLeft) const {
    const double x = snap_to_kink(psi_inv(t, y));
    return slope_along(t, x, side);
  }

  /// u_xx(t, y) = u0''(x) / (1 + t u0'(x))^3, undefined on transported kinks.
  double u_xx(double t, double y) const {
    const double x = snap_to_kink(psi_inv(t, y));
    if (std::fabs(x) == data_.q0()) {
      throw DomainError("u_xx is undefined on the transported kink y=" +
                        std::to_string(y));
    }
    const double j = stretch(t, x);
    return data_.ddu0(x) / (j * j * j);
  }

  /// Lagrangian slope u_x(t, psi(t, x)) for a given label x.
  double slope_along(double t, double x, Side side = Side::kLeft) const {
    check_time(t);
    return data_.du0(x, side) / stretch(t, x, side);
  }

  /// m(t) = u_x(t, psi(t, 0)), the slope carried by the central characteristic.
  double m_tilde(double t) const {
    check_time(t);
    return data_.slope_at_origin() / stretch(t, 0.0);
  }

  /// sup_x |u_x(t, x)| = 1 / (T* - t).
  double lipschitz_norm(double t) const {
    check_time(t);
    return 1.0 / (tstar_ - t);
  }

  /// u(t, y_i) on an increasing grid. Each inversion reuses the previous
  /// root as the lower end of its bracket.
  std::vector<double> sample_profile(double t, std::span<const double> grid) const {
    check_time(t);
    std::vector<double> out;
    out.reserve(grid.size());
    const double reach = t * data_.sup_abs_u0();
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double y = grid[i];
      if (i > 0 && !(y > grid[i - 1])) {
        throw DomainError("sample grid must be strictly increasing (index " +
                          std::to_string(i) + ")");
      }
      const double lo = std::max(y - reach, previous);
      try {
        previous = invert(t, y, lo, y + reach);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("sample_profile index " + std::to_string(i) +
                               ": " + e.what());
      }
      out.push_back(data_.u0(previous));
    }
    return out;
  }

  void check_time(double t) const {
    if (!(t >= 0.0 && t < tstar_)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "time t=" << t << " outside [0, T*) with T*=" << tstar_;
      throw TimeDomainError(msg.str());
    }
  }

 private:
  // Labels within a few root-finding tolerances of a kink are treated as the
  // kink itself so the caller's `side` decides the branch.
  double snap_to_kink(double x) const noexcept {
    const double q0 = data_.q0();
    const double band = 4.0 * inversion_.abs_tol;
    if (std::fabs(x - q0) <= band) return q0;
    if (std::fabs(x + q0) <= band) return -q0;
    return x;
  }

  // Bisection safeguarded Newton on the strictly increasing map x -> psi(t,x).
  // psi_x >= 1 - t/T* everywhere, so |residual| <= tol (1 - t/T*) certifies
  // |x - root| <= tol.
  double invert(double t, double y, double lo, double hi) const {
    if (t == 0.0 || y == 0.0) return y;
    auto residual = [&](double x) { return x + t * data_.u0(x) - y; };
    const double min_slope = 1.0 - t / tstar_;
    const double accept = inversion_.abs_tol * min_slope;
    const double f_lo = residual(lo);
    const double f_hi = residual(hi);
    if (f_lo > 0.0 || f_hi < 0.0) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "inversion bracket [" << lo << ", " << hi
          << "] does not enclose y=" << y;
      throw ConvergenceError(msg.str());
    }
    if (std::fabs(f_lo) <= accept) return lo;
    if (std::fabs(f_hi) <= accept) return hi;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < inversion_.max_iterations; ++it) {
      const double f = residual(x);
      if (std::fabs(f) <= accept) return x;
      if (f < 0.0) {
        lo = x;
      } else {
        hi = x;
      }
      if (std::nextafter(lo, hi) >= hi) return x;
      // The one-sided slope facing the root; across a kink the step may
      // leave the bracket and is then replaced by bisection.
      const double slope =
          1.0 + t * data_.du0(x, f < 0.0 ? Side::kRight : Side::kLeft);
      const double next = x - f / slope;
      x = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "psi inversion for y=" << y << " at t=" << t << " did not reach tol "
        << inversion_.abs_tol << " in " << inversion_.max_iterations
        << " iterations (bracket [" << lo << ", " << hi << "])";
    throw ConvergenceError(msg.str());
  }

  PeakonPair data_;
  double tstar_;
  InversionSpec inversion_;
};

}  // namespace burgers
