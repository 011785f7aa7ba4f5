#pragma once

// Globally adaptive Gauss-Kronrod (7, 15) integration and the frequency-space
// H^s norm of the peakon data.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

#include "burgers_ip/errors.hpp"
#include "burgers_ip/peakon.hpp"

namespace burgers {

struct QuadratureSpec {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  /// Bisection depth limit for any single subinterval.
  int max_depth = 64;
  /// Hard cap on the number of live subintervals.
  std::size_t max_intervals = 2'000'000;
  /// The frequency integral is cut at a whole number of periods of
  /// sin^2(q0 xi); this caps that number.
  std::size_t max_frequency_periods = 2'000'000;
  /// Multiplier applied to the automatically chosen frequency cutoff.
  double frequency_cutoff_scale = 1.0;
  /// Half-width of the spatial truncation for integrals over the real line.
  double spatial_half_width = 40.0;

  void validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
    if (!(abs_tol >= 0.0)) throw DomainError("abs_tol must be nonnegative");
    if (max_depth < 1) throw DomainError("max_depth must be at least 1");
    if (max_intervals < 1) throw DomainError("max_intervals must be positive");
    if (!(frequency_cutoff_scale >= 1.0)) {
      throw DomainError("frequency_cutoff_scale must be >= 1");
    }
    if (!(spatial_half_width > 1.0)) {
      throw DomainError("spatial_half_width must exceed 1");
    }
  }
};

/// Result of an integral or a norm. For norms `value` is the norm itself and
/// both error fields are on the same (non-squared) scale.
struct NormReport {
  double value = 0.0;
  double error_estimate = 0.0;
  double tail_bound = 0.0;
  std::size_t evaluations = 0;
  /// Truncation point used for improper integrals (0 when not applicable).
  double cutoff = 0.0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
};

struct PanelWorse {
  bool operator()(const Panel& l, const Panel& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  }
};

template <class F>
Panel gauss_kronrod15(const F& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::fabs(kronrod - gauss), depth};
}

/// Neumaier-compensated sum in the given order.
inline double compensated_sum(std::span<const double> terms) {
  double sum = 0.0;
  double carry = 0.0;
  for (double t : terms) {
    const double next = sum + t;
    carry += std::fabs(sum) >= std::fabs(t) ? (sum - next) + t
                                            : (t - next) + sum;
    sum = next;
  }
  return sum + carry;
}

/// Converts an error bound on a squared quantity into one on its square root.
inline double sqrt_error(double squared, double squared_error) {
  if (squared_error <= 0.0) return 0.0;
  const double lo = std::max(squared - squared_error, 0.0);
  return squared_error / (std::sqrt(squared) + std::sqrt(lo));
}

}  // namespace detail

/// Integrates f over [a, b]. Every breakpoint in `hints` strictly inside
/// (a, b) becomes an initial split, so jumps in f or its derivatives located
/// there never fall inside a panel.
///
/// Panels are refined worst-first until the summed Kronrod-Gauss difference
/// is at most max(rel_tol |value|, abs_tol). Throws ConvergenceError naming
/// the worst panel when it would have to be split past max_depth.
template <class F>
NormReport integrate_adaptive(const F& f, double a, double b,
                              const QuadratureSpec& spec,
                              std::span<const double> hints = {}) {
  spec.validate();
  if (!(a < b)) {
    throw DomainError("integration interval requires a < b");
  }
  std::vector<double> breaks;
  breaks.reserve(hints.size() + 2);
  breaks.push_back(a);
  for (double h : hints) {
    if (h > a && h < b) breaks.push_back(h);
  }
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::priority_queue<detail::Panel, std::vector<detail::Panel>,
                      detail::PanelWorse>
      queue;
  double total = 0.0;
  double total_error = 0.0;
  std::size_t evaluations = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto panel = detail::gauss_kronrod15(f, breaks[i], breaks[i + 1], 0);
    evaluations += 15;
    total += panel.value;
    total_error += panel.error;
    queue.push(panel);
  }

  while (total_error > std::max(spec.rel_tol * std::fabs(total), spec.abs_tol)) {
    const detail::Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= spec.max_depth || queue.size() >= spec.max_intervals ||
        !(mid > worst.a && mid < worst.b)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "adaptive quadrature exhausted at depth " << worst.depth
          << " on [" << worst.a << ", " << worst.b << "] (panel error "
          << worst.error << ", total error " << total_error << ", value "
          << total << ")";
      throw ConvergenceError(msg.str());
    }
    queue.pop();
    const auto left = detail::gauss_kronrod15(f, worst.a, mid, worst.depth + 1);
    const auto right = detail::gauss_kronrod15(f, mid, worst.b, worst.depth + 1);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    // Guard against drift of the running sums.
    if (total_error < 0.0) total_error = 0.0;
  }

  // Deterministic final reduction, ordered by position.
  std::vector<detail::Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const auto& l, const auto& r) { return l.a < r.a; });
  std::vector<double> values;
  std::vector<double> errors;
  values.reserve(panels.size());
  errors.reserve(panels.size());
  for (const auto& p : panels) {
    values.push_back(p.value);
    errors.push_back(p.error);
  }
  NormReport report;
  report.value = detail::compensated_sum(values);
  report.error_estimate = detail::compensated_sum(errors);
  report.evaluations = evaluations;
  return report;
}

/// Squared H^s norm of the peakon data,
///   ||u0||^2 = 16 p0^2 int_R (1+xi^2)^(s-2) sin^2(q0 xi) d xi,
/// i.e. with the unnormalized transform convention.
///
/// The frequency axis is cut at M = N pi / q0 (a zero of sin(2 q0 xi)).
/// Beyond M, sin^2 = (1 - cos(2 q0 xi))/2: the non-oscillatory half is
/// integrated exactly after mapping [M, inf) onto (0, 1], and the cosine
/// half is bounded by |g'(M)| / (2 q0)^2 through one integration by parts
/// and the second mean value theorem (g = (1+xi^2)^(s-2)).
struct HsNormSquared {
  double value;
  double error_estimate;
  double tail_bound;
  std::size_t evaluations;
  double cutoff;
};

inline HsNormSquared hs_norm_squared_u0(const PeakonPair& data,
                                        SobolevIndex index,
                                        const QuadratureSpec& spec) {
  spec.validate();
  const double s = index.value();
  const double p0 = data.p0();
  const double q0 = data.q0();
  const double pi = std::numbers::pi;
  const double a = 2.0 - s;
  const double nu = 1.5 - s;
  const double weight = 32.0 * p0 * p0;

  auto g = [s](double xi) { return std::pow(1.0 + xi * xi, s - 2.0); };
  auto abs_dg = [a](double xi) {
    return 2.0 * a * xi * std::pow(1.0 + xi * xi, -a - 1.0);
  };
  // Certified bound on the squared tail beyond M.
  auto tail_bound_at = [&](double cutoff) {
    return weight * abs_dg(cutoff) / (4.0 * q0 * q0);
  };

  // Target: tail <= half of rel_tol times the certified lower bracket.
  const double lower_sq =
      norm_bracket(index).lower * p0 * p0 * std::pow(q0, 3.0 - 2.0 * s);
  const double tail_target =
      0.5 * std::max(spec.rel_tol * lower_sq, spec.abs_tol * spec.abs_tol);
  // |g'(M)| <= 2a M^(2s-5) for M >= 1.
  double cutoff = std::pow(weight * 2.0 * a / (4.0 * q0 * q0 * tail_target),
                           1.0 / (5.0 - 2.0 * s));
  cutoff = std::max({cutoff, 1.0 / q0, 1.0}) * spec.frequency_cutoff_scale;
  const double period = pi / q0;
  const double periods = std::ceil(cutoff / period);
  if (periods > static_cast<double>(spec.max_frequency_periods)) {
    throw ConvergenceError(
        "frequency cutoff needs " + std::to_string(periods) +
        " periods, above max_frequency_periods=" +
        std::to_string(spec.max_frequency_periods));
  }
  const auto n_periods = static_cast<std::size_t>(periods);
  cutoff = static_cast<double>(n_periods) * period;

  std::vector<double> hints;
  hints.reserve(n_periods);
  for (std::size_t k = 1; k < n_periods; ++k) {
    hints.push_back(static_cast<double>(k) * period);
  }
  QuadratureSpec body_spec = spec;
  body_spec.rel_tol = 0.25 * spec.rel_tol;
  const auto body = integrate_adaptive(
      [&](double xi) {
        const double sn = std::sin(q0 * xi);
        return g(xi) * sn * sn;
      },
      0.0, cutoff, body_spec, hints);

  // int_M^inf (1+xi^2)^(-a) d xi with xi = M r^(-1/(2 nu)).
  const double inv_m2 = 1.0 / (cutoff * cutoff);
  const double scale = std::pow(cutoff, -2.0 * nu) / (2.0 * nu);
  const auto smooth_tail = integrate_adaptive(
      [&](double r) {
        return scale * std::pow(1.0 + inv_m2 * std::pow(r, 1.0 / nu), -a);
      },
      0.0, 1.0, body_spec);

  HsNormSquared out;
  out.value = weight * (body.value + 0.5 * smooth_tail.value);
  out.error_estimate =
      weight * (body.error_estimate + 0.5 * smooth_tail.error_estimate);
  out.tail_bound = tail_bound_at(cutoff);
  out.evaluations = body.evaluations + smooth_tail.evaluations;
  out.cutoff = cutoff;
  return out;
}

/// ||u0||_{H^s} with error and tail bounds expressed on the norm scale.
inline NormReport hs_norm_u0(const PeakonPair& data, SobolevIndex index,
                             const QuadratureSpec& spec) {
  const auto sq = hs_norm_squared_u0(data, index, spec);
  NormReport r;
  r.value = std::sqrt(sq.value);
  r.error_estimate = detail::sqrt_error(sq.value, sq.error_estimate);
  r.tail_bound = detail::sqrt_error(sq.value, sq.tail_bound);
  r.evaluations = sq.evaluations;
  r.cutoff = sq.cutoff;
  return r;
}

}  // namespace burgers
