#include "prolate_squeeze/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace psq::quad {
namespace {

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int n : {1, 2, 5, 16, 200}) {
    const Rule r = gauss_legendre(n);
    for (int d = 0; d < 2 * n; d += (n > 10 ? 7 : 1)) {
      double acc = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], d);
      const double exact = (d % 2 == 1) ? 0.0 : 2.0 / (d + 1);
      EXPECT_NEAR(acc, exact, 1e-13) << "n=" << n << " d=" << d;
    }
  }
}

TEST(GaussLegendre, NodesAscendingAndSymmetric) {
  const Rule r = gauss_legendre(37);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r.nodes[i], -r.nodes[r.size() - 1 - i]);
}

TEST(Gregory, ExactForLowDegreePolynomials) {
  const double h = 0.125;
  const std::size_t n = 40;  // [0, 5]
  const auto w = gregory_weights(n, h);
  for (int d = 0; d < 6; ++d) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) acc += w[i] * std::pow(i * h, d);
    const double exact = std::pow(5.0, d + 1) / (d + 1);
    EXPECT_NEAR(acc, exact, 1e-11 * exact) << "degree " << d;
  }
}

TEST(Gregory, HighOrderOnSmoothOscillatoryIntegrand) {
  const double h = 1.0 / 64.0;
  const std::size_t n = 128;  // [-1, 1]
  const auto w = gregory_weights(n, h);
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) acc += w[i] * std::cos(6.0 * (-1.0 + i * h));
  EXPECT_NEAR(acc, 2.0 * std::sin(6.0) / 6.0, 1e-9);
}

TEST(Gregory, ShortPanelsFallBackToTrapezoid) {
  const auto w = gregory_weights(1, 0.5);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  EXPECT_DOUBLE_EQ(w[1], 0.25);
}

TEST(Adaptive, HandlesJumpAtBreakpoint) {
  auto step = [](double x) { return x < 0.3 ? std::exp(x) : 0.0; };
  const double bp[] = {0.3};
  const auto r = integrate(step, -1.0, 2.0, bp);
  EXPECT_NEAR(r.value, std::exp(0.3) - std::exp(-1.0), 1e-13);
}

TEST(Adaptive, VectorIntegrand) {
  const auto r = integrate(
      [](double x, std::span<double> out) {
        out[0] = std::sin(x);
        out[1] = x * x;
      },
      2, 0.0, std::numbers::pi);
  EXPECT_NEAR(r.value[0], 2.0, 1e-13);
  EXPECT_NEAR(r.value[1], std::pow(std::numbers::pi, 3) / 3.0, 1e-12);
}

}  // namespace
}  // namespace psq::quad
