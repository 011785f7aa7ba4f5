#pragma once

// Two-peakon initial data u0(x) = p0 (exp(-|x+q0|) - exp(-|x-q0|)) and the
// closed-form quantities derived from it.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "burgers_ip/errors.hpp"

namespace burgers {

/// Selects a one-sided limit at a point where a piecewise function jumps.
enum class Side { kLeft, kRight };

inline const char* to_string(Side side) {
  return side == Side::kLeft ? "left" : "right";
}

/// Sobolev regularity exponent, restricted to the open range (1/2, 3/2)
/// where the norm of the peakon data is finite and the bracket constants
/// are defined.
class SobolevIndex {
 public:
  explicit SobolevIndex(double s) : s_(s) {
    if (!(s > 0.5 && s < 1.5)) {
      throw DomainError("Sobolev index s=" + std::to_string(s) +
                        " outside the open interval (1/2, 3/2)");
    }
  }

  double value() const noexcept { return s_; }

  /// True when the index is in the ill-posedness range [1, 3/2).
  bool in_inflation_range() const noexcept { return s_ >= 1.0; }

 private:
  double s_;
};

class PeakonPair {
 public:
  PeakonPair(double p0, double q0) : p0_(p0), q0_(q0) {
    if (!(p0 > 0.0) || !std::isfinite(p0)) {
      throw DomainError("p0 must be positive and finite, got " +
                        std::to_string(p0));
    }
    if (!(q0 > 0.0 && q0 < 1.0)) {
      throw DomainError("q0 must lie in (0, 1), got " + std::to_string(q0));
    }
    sinh_q0_ = std::sinh(q0);
    exp_mq0_ = std::exp(-q0);
  }

  double p0() const noexcept { return p0_; }
  double q0() const noexcept { return q0_; }

  double u0(double x) const noexcept {
    if (x >= q0_) return -2.0 * p0_ * sinh_q0_ * std::exp(-x);
    if (x <= -q0_) return 2.0 * p0_ * sinh_q0_ * std::exp(x);
    return -2.0 * p0_ * exp_mq0_ * std::sinh(x);
  }

  /// u0'(x). At the kinks x = +-q0 the requested one-sided limit is returned;
  /// elsewhere `side` is ignored.
  double du0(double x, Side side = Side::kLeft) const noexcept {
    const bool inner = (std::fabs(x) < q0_) ||
                       (x == q0_ && side == Side::kLeft) ||
                       (x == -q0_ && side == Side::kRight);
    if (inner) return -2.0 * p0_ * exp_mq0_ * std::cosh(x);
    return 2.0 * p0_ * sinh_q0_ * std::exp(-std::fabs(x));
  }

  /// Branchwise second derivative; undefined at the kinks.
  double ddu0(double x) const {
    if (x == q0_ || x == -q0_) {
      throw DomainError("u0'' does not exist at the kink x=" +
                        std::to_string(x));
    }
    if (x > q0_) return -2.0 * p0_ * sinh_q0_ * std::exp(-x);
    if (x < -q0_) return 2.0 * p0_ * sinh_q0_ * std::exp(x);
    return -2.0 * p0_ * exp_mq0_ * std::sinh(x);
  }

  /// Fourier transform with the convention \hat f(xi) = int exp(-i x xi) f(x) dx.
  std::complex<double> fourier(double xi) const noexcept {
    return {0.0, 4.0 * p0_ * std::sin(q0_ * xi) / (1.0 + xi * xi)};
  }

  /// u0'(0) = -2 p0 exp(-q0), the slope at the origin.
  double slope_at_origin() const noexcept { return -2.0 * p0_ * exp_mq0_; }

  /// u0'(q0^-) = -p0 (1 + exp(-2 q0)), the steepest slope.
  double slope_at_kink_inside() const noexcept {
    return -p0_ * (1.0 + std::exp(-2.0 * q0_));
  }

  /// sup |u0| = p0 (1 - exp(-2 q0)), attained at x = -+q0.
  double sup_abs_u0() const noexcept { return -p0_ * std::expm1(-2.0 * q0_); }

  /// Lipschitz seminorm sup |u0'|.
  double lip_seminorm() const noexcept { return -slope_at_kink_inside(); }

  /// A0 = int_{|x|<=q0} u0'(x)^2 dx in closed form.
  double a0() const noexcept {
    return p0_ * p0_ *
           (-std::expm1(-4.0 * q0_) + 4.0 * q0_ * std::exp(-2.0 * q0_));
  }

  /// T* = -1 / u0'(q0^-).
  double blowup_time() const noexcept { return -1.0 / slope_at_kink_inside(); }

  /// 1 - exp(-q0) without cancellation.
  double one_minus_exp_mq0() const noexcept { return -std::expm1(-q0_); }

  /// Antiderivative of u0 with U(0) = 0 (u0 is odd, so U is even).
  double antiderivative(double x) const noexcept {
    auto e = [](double z) {
      return std::copysign(-std::expm1(-std::fabs(z)), z);
    };
    return p0_ * (e(x + q0_) - e(x - q0_));
  }

 private:
  double p0_;
  double q0_;
  double sinh_q0_;
  double exp_mq0_;
};

inline PeakonPair make_peakon_pair(double p0, double q0) {
  return PeakonPair(p0, q0);
}

/// Constants (lower, upper) with lower * q0^(3-2s) <= ||f||_{H^s}^2 <=
/// upper * q0^(3-2s) for the unit-amplitude profile f, uniformly in q0 in (0,1).
struct NormBracket {
  double lower;
  double upper;
};

inline NormBracket norm_bracket(SobolevIndex index) {
  const double s = index.value();
  const double pi = std::numbers::pi;
  const double lower = 16.0 * pi * std::pow(1.0 + pi * pi, -1.5);
  // sin^2(q0 xi) <= (q0 xi)^2 on [0, 1/q0] and <= 1 beyond, with
  // (1+xi^2)^(s-2) <= xi^(2s-4); the factor 32 comes from doubling the even
  // integrand of 16 (1+xi^2)^(s-2) sin^2(q0 xi).
  const double upper = 32.0 / (2.0 * s - 1.0) + 32.0 / (3.0 - 2.0 * s);
  return {lower, upper};
}

}  // namespace burgers
