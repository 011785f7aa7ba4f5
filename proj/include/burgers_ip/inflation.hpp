#pragma once

// Norm-inflation certificate: for a target delta, pick peakon parameters with
// ||u0||_{H^s} <= delta and T* < delta, then find T0 < T* with
// ||u(T0)||_{H^1} >= 1/delta.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "burgers_ip/errors.hpp"
#include "burgers_ip/flow.hpp"
#include "burgers_ip/norms.hpp"
#include "burgers_ip/peakon.hpp"
#include "burgers_ip/quadrature.hpp"

namespace burgers {

/// sqrt(A0 m(T*) / m(0)) = sqrt(A0 (1 + e^{-2q0})) / (1 - e^{-q0}): the
/// Gronwall lower bound on ||u_x(t)||_{L^2} in the limit t -> T*.
inline double limiting_lower_bound(const PeakonPair& d) {
  return std::sqrt(d.a0() * (1.0 + std::exp(-2.0 * d.q0()))) /
         d.one_minus_exp_mq0();
}

/// limiting_lower_bound / (p0 q0^{-1/2}); tends to 4 as q0 -> 0.
inline double scaling_ratio(double q0) {
  return limiting_lower_bound(PeakonPair(1.0, q0)) * std::sqrt(q0);
}

struct InflationConstants {
  double c1;
  double c2;
  /// Smallest scaling_ratio seen on the calibration grid, and where.
  double ratio_infimum;
  double ratio_argmin;
};

/// c1 = sqrt(U(s)) bounds ||u0||_{H^s} <= c1 p0 q0^{3/2-s}; c2 is half the
/// infimum of scaling_ratio over q0 in (0, 1/2], measured on a log grid.
inline InflationConstants calibrate_constants(SobolevIndex index) {
  if (!index.in_inflation_range()) {
    throw DomainError("inflation requires 1 <= s < 3/2, got s=" +
                      std::to_string(index.value()));
  }
  constexpr int kGrid = 2001;
  const double lo = std::log(1e-8);
  const double hi = std::log(0.5);
  double best = std::numeric_limits<double>::infinity();
  double where = 0.5;
  for (int i = 0; i < kGrid; ++i) {
    const double q0 =
        i + 1 == kGrid ? 0.5 : std::exp(lo + (hi - lo) * i / (kGrid - 1));
    const double r = scaling_ratio(q0);
    if (r < best) {
      best = r;
      where = q0;
    }
  }
  return {std::sqrt(norm_bracket(index).upper), 0.5 * best, best, where};
}

struct InflationParameters {
  double p0;
  double q0;
  /// The two competing caps on q0 (H^s smallness, H^1 largeness).
  double q0_hs_cap;
  double q0_h1_cap;
};

/// p0 = 1/delta; q0 = min((delta/(c1 p0))^{2/(3-2s)}, c2^2 p0^2 delta^4, 1/2).
inline InflationParameters choose_parameters(double delta, SobolevIndex index,
                                             double c1, double c2) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("delta must be positive, got " + std::to_string(delta));
  }
  if (!index.in_inflation_range()) {
    throw DomainError("inflation requires 1 <= s < 3/2");
  }
  const double s = index.value();
  const double p0 = 1.0 / delta;
  const double hs_cap = std::pow(delta / (c1 * p0), 2.0 / (3.0 - 2.0 * s));
  const double h1_cap = c2 * c2 * p0 * p0 * std::pow(delta, 4.0);
  const double q0 = std::min({hs_cap, h1_cap, 0.5});
  // The blow-up time and the pole of m(t) are separated by about
  // q0^2 / (4 p0); below a few ulps the two are indistinguishable.
  if (!(q0 >= DBL_MIN) || 0.25 * q0 * q0 <= 4.0 * DBL_EPSILON) {
    throw DegenerateParameterError(
        "q0=" + std::to_string(q0) + " for delta=" + std::to_string(delta) +
        " is below the resolvable scale of double precision");
  }
  return {p0, q0, hs_cap, h1_cap};
}

struct Check {
  std::string name;
  bool passed;
  /// Positive when the inequality holds with room to spare.
  double margin;
};

struct ScanPoint {
  int k;
  double t;
  double h1;
  double h1_lower;  // value minus its error and tail bounds
};

struct InflationReport {
  double delta = 0.0;
  double s = 0.0;
  double p0 = 0.0;
  double q0 = 0.0;
  double c1_emp = 0.0;
  double c2_emp = 0.0;
  double hs_norm_initial = 0.0;
  /// hs_norm_initial plus its error and tail bounds.
  double hs_norm_initial_upper = 0.0;
  double tstar = 0.0;
  double t0 = 0.0;
  double h1_at_t0 = 0.0;
  double h1_at_t0_lower = 0.0;
  std::vector<Check> checks;
  std::vector<ScanPoint> scan;

  bool passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.passed; });
  }

  const Check* first_failure() const {
    for (const auto& c : checks) {
      if (!c.passed) return &c;
    }
    return nullptr;
  }

  /// The certificate covers the H^1 norm; for s > 1 the H^s statement
  /// additionally rests on ||u||_{H^s} >= C ||u||_{H^1}, which is not computed.
  bool hs_gap() const noexcept { return s > 1.0; }
};

struct ScanOptions {
  int max_k = 60;
  /// Smallest allowed (T* - t)/T*.
  double min_gap_fraction = 1e-7;
};

/// Runs the full pipeline and records every check; never throws on a failed
/// inequality (see certify_inflation for the throwing form).
inline InflationReport assess_inflation(double delta, SobolevIndex index,
                                        const QuadratureSpec& spec,
                                        const ScanOptions& scan = {}) {
  if (!(delta > 0.0 && delta <= 0.5)) {
    throw DomainError("delta must lie in (0, 0.5], got " +
                      std::to_string(delta));
  }
  const auto constants = calibrate_constants(index);
  const auto params = choose_parameters(delta, index, constants.c1, constants.c2);
  const PeakonPair data(params.p0, params.q0);
  const CharacteristicSolution sol(data);

  InflationReport report;
  report.delta = delta;
  report.s = index.value();
  report.p0 = params.p0;
  report.q0 = params.q0;
  report.c1_emp = constants.c1;
  report.c2_emp = constants.c2;
  report.tstar = sol.tstar();

  const auto hs0 = hs_norm_u0(data, index, spec);
  report.hs_norm_initial = hs0.value;
  report.hs_norm_initial_upper = hs0.value + hs0.error_estimate + hs0.tail_bound;
  const double hs_margin = delta - report.hs_norm_initial_upper;
  report.checks.push_back({"hs_norm_initial<=delta", hs_margin >= 0.0, hs_margin});
  const double tstar_margin = delta - report.tstar;
  report.checks.push_back({"tstar<delta", tstar_margin > 0.0, tstar_margin});

  const double target = 1.0 / delta;
  bool found = false;
  for (int k = 1; k <= scan.max_k; ++k) {
    const double gap = std::ldexp(1.0, -k);
    if (gap < scan.min_gap_fraction) break;
    const double t = report.tstar * (1.0 - gap);
    const auto h1 = h1_norm(sol, t, spec);
    const double lower = h1.value - h1.error_estimate - h1.tail_bound;
    report.scan.push_back({k, t, h1.value, lower});
    if (lower >= target) {
      report.t0 = t;
      report.h1_at_t0 = h1.value;
      report.h1_at_t0_lower = lower;
      found = true;
      break;
    }
  }
  if (!found && !report.scan.empty()) {
    report.t0 = report.scan.back().t;
    report.h1_at_t0 = report.scan.back().h1;
    report.h1_at_t0_lower = report.scan.back().h1_lower;
  }
  const double h1_margin = report.h1_at_t0_lower - target;
  report.checks.push_back({"h1_at_t0>=1/delta", found && h1_margin >= 0.0,
                           h1_margin});
  const double t0_margin = report.tstar - report.t0;
  report.checks.push_back({"0<t0<tstar", report.t0 > 0.0 && t0_margin > 0.0,
                           std::min(t0_margin, report.t0)});

  double min_increment = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < report.scan.size(); ++i) {
    min_increment =
        std::min(min_increment, report.scan[i].h1 - report.scan[i - 1].h1);
  }
  if (report.scan.size() < 2) min_increment = 0.0;
  report.checks.push_back({"h1_scan_nondecreasing", min_increment >= 0.0,
                           min_increment});
  return report;
}

/// As assess_inflation, but a failed check raises CertificationError.
inline InflationReport certify_inflation(double delta, SobolevIndex index,
                                         const QuadratureSpec& spec,
                                         const ScanOptions& scan = {}) {
  auto report = assess_inflation(delta, index, spec, scan);
  if (const Check* failed = report.first_failure()) {
    throw CertificationError(failed->name, failed->margin);
  }
  return report;
}

/// Re-checks the four headline inequalities from the stored numbers alone.
inline bool reverify(const InflationReport& r) {
  return r.hs_norm_initial_upper <= r.delta && r.tstar < r.delta &&
         r.t0 > 0.0 && r.t0 < r.tstar && r.h1_at_t0_lower >= 1.0 / r.delta;
}

struct GronwallRow {
  double t;
  double a;
  double bound;
  double margin;
  /// |exp(-int_0^t m) - m(t)/m(0)| / (m(t)/m(0)), with the integral by quadrature.
  double identity_error;
};

/// A(t) against A0 m(t)/m(0) on a time grid.
inline std::vector<GronwallRow> check_gronwall(const CharacteristicSolution& sol,
                                               std::span<const double> times,
                                               const QuadratureSpec& spec) {
  const double a0 = sol.data().a0();
  const double m0 = sol.m_tilde(0.0);
  std::vector<GronwallRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    const double a = a_of_t(sol, t, spec).value;
    const double ratio = sol.m_tilde(t) / m0;
    const double bound = a0 * ratio;
    double identity_error = 0.0;
    if (t > 0.0) {
      const auto integral = integrate_adaptive(
          [&](double tau) { return sol.m_tilde(tau); }, 0.0, t, spec);
      identity_error = std::fabs(std::exp(-integral.value) - ratio) / ratio;
    }
    rows.push_back({t, a, bound, a - bound, identity_error});
  }
  return rows;
}

}  // namespace burgers
