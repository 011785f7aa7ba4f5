#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "burgers_ip/peakon.hpp"
#include "burgers_ip/quadrature.hpp"
#include "oracles.hpp"

namespace burgers {
namespace {

constexpr double kPi = std::numbers::pi;

QuadratureSpec norm_spec() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  return spec;
}

TEST(IntegrateAdaptive, ElementaryIntegrals) {
  const QuadratureSpec spec;
  const auto one = integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, spec);
  EXPECT_NEAR(one.value, 1.0, 1e-15);
  EXPECT_EQ(one.evaluations, 15u);
  const auto sin2 = integrate_adaptive(
      [](double x) { return std::sin(x) * std::sin(x); }, 0.0, kPi, spec);
  EXPECT_NEAR(sin2.value, kPi / 2.0, 1e-14);
  EXPECT_LE(sin2.error_estimate, spec.rel_tol * sin2.value);
}

TEST(IntegrateAdaptive, SquaredSlopeMatchesA0) {
  const PeakonPair d(1.0, 0.5);
  const auto r = integrate_adaptive(
      [&](double x) { return d.du0(x) * d.du0(x); }, -0.5, 0.5, QuadratureSpec{});
  EXPECT_NEAR(r.value, 1.600423599106271951, 1e-13);
}

TEST(IntegrateAdaptive, HintsRemoveJumpPanels) {
  // Step function: with the jump as a hint the first pass is already exact.
  auto step = [](double x) { return x < 0.3 ? 1.0 : 3.0; };
  const std::array<double, 1> hint = {0.3};
  const auto hinted = integrate_adaptive(step, 0.0, 1.0, QuadratureSpec{}, hint);
  EXPECT_NEAR(hinted.value, 0.3 + 2.1, 1e-15);
  EXPECT_EQ(hinted.evaluations, 30u);
  QuadratureSpec loose;
  loose.rel_tol = 1e-8;
  const auto blind = integrate_adaptive(step, 0.0, 1.0, loose);
  EXPECT_NEAR(blind.value, 2.4, 1e-7);
  EXPECT_GT(blind.evaluations, hinted.evaluations);
}

TEST(IntegrateAdaptive, IntegrableEndpointSingularity) {
  QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  const auto r = integrate_adaptive([](double x) { return -std::log(x); }, 0.0,
                                    1.0, spec);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(IntegrateAdaptive, DepthExhaustionReportsPanel) {
  QuadratureSpec spec;
  spec.max_depth = 8;
  try {
    integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, spec);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("depth 8"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[0, "), std::string::npos) << msg;
  }
}

TEST(IntegrateAdaptive, RejectsEmptyInterval) {
  EXPECT_THROW(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0,
                                  QuadratureSpec{}),
               DomainError);
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  EXPECT_THROW(integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, bad),
               DomainError);
}

TEST(IntegrateAdaptive, DeterministicAcrossRuns) {
  auto f = [](double x) { return std::exp(-x) * std::cos(40.0 * x); };
  const auto a = integrate_adaptive(f, 0.0, 10.0, QuadratureSpec{});
  const auto b = integrate_adaptive(f, 0.0, 10.0, QuadratureSpec{});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error_estimate, b.error_estimate);
}

class HsNormGrid : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(HsNormGrid, MatchesBesselClosedForm) {
  const auto [s, q0] = GetParam();
  const PeakonPair d(1.0, q0);
  const auto sq = hs_norm_squared_u0(d, SobolevIndex(s), norm_spec());
  const double exact = oracle::hs_norm_squared_bessel(1.0, q0, s);
  EXPECT_NEAR(sq.value / exact, 1.0, 1e-8) << "s=" << s << " q0=" << q0;
  EXPECT_LE(std::fabs(sq.value - exact), 2.0 * (sq.error_estimate + sq.tail_bound) + 1e-9 * exact);
}

TEST_P(HsNormGrid, RatioInsideBracket) {
  const auto [s, q0] = GetParam();
  const auto r = hs_norm_u0(PeakonPair(1.0, q0), SobolevIndex(s), norm_spec());
  const auto b = norm_bracket(SobolevIndex(s));
  const double ratio = r.value * r.value / std::pow(q0, 3.0 - 2.0 * s);
  EXPECT_GE(ratio, b.lower);
  EXPECT_LE(ratio, b.upper);
}

TEST_P(HsNormGrid, DoublingCutoffStaysWithinTailBound) {
  const auto [s, q0] = GetParam();
  const PeakonPair d(1.0, q0);
  QuadratureSpec tight = norm_spec();
  tight.rel_tol = 1e-12;
  const auto base = hs_norm_u0(d, SobolevIndex(s), tight);
  QuadratureSpec wide = tight;
  wide.frequency_cutoff_scale = 2.0;
  const auto doubled = hs_norm_u0(d, SobolevIndex(s), wide);
  // The cutoff is rounded to a whole number of periods pi/q0.
  EXPECT_GE(doubled.cutoff, 2.0 * base.cutoff - std::numbers::pi / q0);
  EXPECT_LE(std::fabs(doubled.value - base.value),
            base.tail_bound + base.error_estimate + doubled.error_estimate);
}

INSTANTIATE_TEST_SUITE_P(AcceptanceGrid, HsNormGrid,
                         ::testing::Combine(::testing::Values(1.0, 1.25, 1.4),
                                            ::testing::Values(0.5, 0.1, 0.02)));

TEST(HsNorm, SOneHasElementaryClosedForm) {
  // For s = 1 the norm squared is 8 pi p0^2 (1 - exp(-2 q0)).
  for (double q0 : {0.7, 0.5, 0.1, 1e-3, 1e-5}) {
    const auto sq = hs_norm_squared_u0(PeakonPair(1.0, q0), SobolevIndex(1.0), norm_spec());
    EXPECT_NEAR(sq.value / (-8.0 * kPi * std::expm1(-2.0 * q0)), 1.0, 1e-9)
        << "q0=" << q0;
  }
}

TEST(HsNorm, LinearInAmplitude) {
  const QuadratureSpec spec = norm_spec();
  for (double s : {1.0, 1.3}) {
    const auto one = hs_norm_u0(PeakonPair(1.0, 0.3), SobolevIndex(s), spec);
    const auto two = hs_norm_u0(PeakonPair(2.0, 0.3), SobolevIndex(s), spec);
    EXPECT_NEAR(two.value / one.value, 2.0, 2.0 * spec.rel_tol);
  }
}

TEST(HsNorm, SmallSeparationLimit) {
  // int_R sin^2(y)/y^2 dy = pi gives ||u0||^2 / q0 -> 16 pi at s = 1.
  const double limit = 16.0 * oracle::simpson(
      [](double y) { return y == 0.0 ? 1.0 : std::pow(std::sin(y) / y, 2); },
      0.0, 2000.0 * kPi, 4'000'000) * 2.0;
  EXPECT_NEAR(limit / (16.0 * kPi), 1.0, 2e-4);
  for (double q0 : {0.1, 1e-3}) {
    const auto r = hs_norm_u0(PeakonPair(1.0, q0), SobolevIndex(1.0), norm_spec());
    EXPECT_NEAR(r.value * r.value / q0 / (16.0 * kPi), 1.0, 0.1) << "q0=" << q0;
  }
}

TEST(HsNorm, PeriodCapRaisesConvergenceError) {
  QuadratureSpec spec = norm_spec();
  spec.max_frequency_periods = 10;
  EXPECT_THROW(hs_norm_u0(PeakonPair(1.0, 0.5), SobolevIndex(1.4), spec),
               ConvergenceError);
}

}  // namespace
}  // namespace burgers
