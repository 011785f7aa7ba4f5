#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "burgers_ip/flow.hpp"
#include "oracles.hpp"

namespace burgers {
namespace {

const PeakonPair kData(1.0, 0.5);

TEST(CharacteristicSolution, FlowMap) {
  const CharacteristicSolution sol(kData);
  EXPECT_EQ(sol.psi(0.0, 1.7), 1.7);
  EXPECT_NEAR(sol.psi(0.5, -0.5), -0.183939720585721161, 1e-15);
  EXPECT_EQ(sol.psi(0.6, 0.0), 0.0);
}

TEST(CharacteristicSolution, TimeDomainIsChecked) {
  const CharacteristicSolution sol(kData);
  EXPECT_THROW(sol.psi(-1e-3, 0.0), TimeDomainError);
  EXPECT_THROW(sol.psi(sol.tstar(), 0.0), TimeDomainError);
  EXPECT_THROW(sol.u(1.0, 0.2), TimeDomainError);
  EXPECT_THROW(sol.m_tilde(sol.tstar()), TimeDomainError);
  EXPECT_NO_THROW(sol.psi(std::nextafter(sol.tstar(), 0.0), 0.3));
}

TEST(CharacteristicSolution, FlowDerivative) {
  const CharacteristicSolution sol(kData);
  EXPECT_EQ(sol.psi_x(0.0, 0.3), 1.0);
  EXPECT_NEAR(sol.psi_x(0.5, 0.5, Side::kLeft), 0.316060279414278839, 1e-15);
  const double near = sol.tstar() * (1.0 - 1e-9);
  const double jac = sol.psi_x(near, 0.5, Side::kLeft);
  EXPECT_GT(jac, 0.0);
  EXPECT_LT(jac, 2e-9);
  // Stable and naive forms agree away from T*.
  for (double x : {-0.4, 0.0, 0.2, 0.49}) {
    EXPECT_NEAR(sol.psi_x(0.3, x), 1.0 + 0.3 * kData.du0(x), 1e-15);
  }
}

TEST(CharacteristicSolution, Inverse) {
  const CharacteristicSolution sol(kData);
  EXPECT_EQ(sol.psi_inv(0.0, 1.7), 1.7);
  EXPECT_EQ(sol.psi_inv(0.4, 0.0), 0.0);
  EXPECT_NEAR(sol.psi_inv(0.5, -0.183939720585721161), -0.5, 1e-12);
}

TEST(CharacteristicSolution, InverseAgreesWithBisectionOracle) {
  const CharacteristicSolution sol(PeakonPair(3.0, 0.2));
  const double t = 0.97 * sol.tstar();
  for (double y : {-4.0, -0.2, -0.01, 0.05, 0.13, 2.5}) {
    const double ref = oracle::bisect_inverse(
        [&](double x) { return x + t * sol.data().u0(x); }, y, y - 10.0, y + 10.0);
    EXPECT_NEAR(sol.psi_inv(t, y), ref, 1e-12) << "y=" << y;
  }
}

TEST(CharacteristicSolution, SolutionValues) {
  const CharacteristicSolution sol(kData);
  EXPECT_EQ(sol.u(0.0, 0.3), kData.u0(0.3));
  EXPECT_EQ(sol.u(0.5, 0.0), 0.0);
  EXPECT_NEAR(sol.u(0.5, -0.183939720585721161), 0.632120558828557678, 1e-12);
}

TEST(CharacteristicSolution, Slopes) {
  const CharacteristicSolution sol(kData);
  EXPECT_NEAR(sol.u_x(0.0, 0.3), kData.du0(0.3), 1e-15);
  for (double t : {0.0, 0.2, 0.7}) {
    EXPECT_NEAR(sol.u_x(t, 0.0), -2.0 * std::exp(-0.5) / (1.0 - 2.0 * t * std::exp(-0.5)),
                1e-14);
    EXPECT_DOUBLE_EQ(sol.u_x(t, 0.0), sol.m_tilde(t));
  }
  const double kink = sol.psi(0.5, 0.5);
  EXPECT_NEAR(sol.u_x(0.5, kink, Side::kLeft), -4.327906827477305698, 1e-11);
  EXPECT_NEAR(sol.u_x(0.5, kink, Side::kLeft), -1.0 / (sol.tstar() - 0.5), 1e-11);
  EXPECT_NEAR(sol.u_x(0.5, kink, Side::kRight),
              kData.du0(0.5, Side::kRight) / (1.0 + 0.5 * kData.du0(0.5, Side::kRight)),
              1e-12);
}

TEST(CharacteristicSolution, SecondDerivative) {
  const CharacteristicSolution sol(kData);
  EXPECT_EQ(sol.u_xx(0.4, 0.0), 0.0);
  EXPECT_NEAR(sol.u_xx(0.0, 0.25), -0.306434230330390161, 1e-14);
  const double y = sol.psi(0.5, 0.25);
  const double j = sol.psi_x(0.5, 0.25);
  // The label is recovered to 1e-12, which u_xx amplifies by about |u_xxx|.
  EXPECT_NEAR(sol.u_xx(0.5, y), kData.ddu0(0.25) / (j * j * j), 1e-10);
  EXPECT_THROW(sol.u_xx(0.5, sol.psi(0.5, 0.5)), DomainError);
}

TEST(CharacteristicSolution, CentralSlope) {
  const CharacteristicSolution sol(kData);
  EXPECT_NEAR(sol.m_tilde(0.0), -1.213061319425266847, 1e-15);
  // m(T*)/m(0) = (1 + e^{-2q0}) / (1 - e^{-q0})^2 as a limit.
  const double near = sol.tstar() * (1.0 - 1e-12);
  EXPECT_NEAR(sol.m_tilde(near) / sol.m_tilde(0.0), 8.835396178065527530, 1e-9);
}

TEST(CharacteristicSolution, LipschitzNorm) {
  const CharacteristicSolution sol(kData);
  EXPECT_NEAR(sol.lipschitz_norm(0.0), kData.lip_seminorm(), 1e-15);
  EXPECT_NEAR(sol.lipschitz_norm(0.5), 4.327906827477305698, 1e-12);
  EXPECT_GE(sol.lipschitz_norm(sol.tstar() * (1.0 - 1e-6)), 1e5);
}

TEST(CharacteristicSolution, SampleProfile) {
  const CharacteristicSolution sol(kData);
  std::vector<double> grid;
  for (int i = -200; i <= 200; ++i) grid.push_back(0.05 * i);
  const auto at0 = sol.sample_profile(0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(at0[i], kData.u0(grid[i]));
  const double t = 0.5 * sol.tstar();
  const auto half = sol.sample_profile(t, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(half[i], -half[grid.size() - 1 - i], 1e-12);
    EXPECT_NEAR(half[i], sol.u(t, grid[i]), 1e-12);
  }
  const std::vector<double> bad = {0.0, 0.0};
  EXPECT_THROW(sol.sample_profile(t, bad), DomainError);
}

TEST(CharacteristicSolution, ConvergenceFailureIsReported) {
  InversionSpec starved;
  starved.max_iterations = 1;
  starved.abs_tol = 1e-15;
  const CharacteristicSolution sol(kData, starved);
  try {
    sol.psi_inv(0.7, 0.3123);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("1 iterations"), std::string::npos);
  }
}

// Randomized invariants, 10^4 draws each.
class FlowProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{2024};
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  CharacteristicSolution sol{PeakonPair(1.0, 0.5)};

  double draw_time() { return 0.99 * sol.tstar() * unit(rng); }
  double draw_x() { return -8.0 + 16.0 * unit(rng); }
};

TEST_F(FlowProperties, RoundTrip) {
  for (int i = 0; i < 10000; ++i) {
    const double t = draw_time();
    const double y = draw_x();
    ASSERT_LE(std::fabs(sol.psi(t, sol.psi_inv(t, y)) - y), 1e-10);
  }
}

TEST_F(FlowProperties, InverseIdentity) {
  for (int i = 0; i < 10000; ++i) {
    const double t = draw_time();
    const double y = draw_x();
    ASSERT_NEAR(sol.psi_inv(t, y), y - t * sol.u(t, y), 1e-10);
  }
}

TEST_F(FlowProperties, Transport) {
  for (int i = 0; i < 10000; ++i) {
    const double t = draw_time();
    const double x = draw_x();
    ASSERT_NEAR(sol.u(t, sol.psi(t, x)), kData.u0(x), 1e-10);
  }
}

TEST_F(FlowProperties, Oddness) {
  for (int i = 0; i < 10000; ++i) {
    const double t = draw_time();
    const double y = draw_x();
    ASSERT_NEAR(sol.u(t, -y), -sol.u(t, y), 1e-10);
  }
}

TEST_F(FlowProperties, Monotonicity) {
  for (int i = 0; i < 10000; ++i) {
    const double t = draw_time();
    double a = draw_x();
    double b = draw_x();
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    ASSERT_LT(sol.psi(t, a), sol.psi(t, b));
  }
}

TEST_F(FlowProperties, SlopeBoundedByCentralSlope) {
  for (int i = 0; i < 200; ++i) {
    const double t = draw_time();
    for (int j = 1; j < 200; ++j) {
      const double x = -0.5 + j / 200.0;
      ASSERT_LE(sol.slope_along(t, x), sol.m_tilde(t) + 1e-12);
    }
  }
}

TEST_F(FlowProperties, FiniteDifferenceSlopeIsSecondOrder) {
  const double t = 0.6 * sol.tstar();
  for (double x : {-2.0, -0.3, 0.1, 1.5}) {
    const double y = sol.psi(t, x);
    auto fd = [&](double h) { return (sol.u(t, y + h) - sol.u(t, y - h)) / (2.0 * h); };
    const double e1 = std::fabs(fd(2e-3) - sol.u_x(t, y));
    const double e2 = std::fabs(fd(1e-3) - sol.u_x(t, y));
    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1) << "x=" << x;
  }
}

}  // namespace
}  // namespace burgers
