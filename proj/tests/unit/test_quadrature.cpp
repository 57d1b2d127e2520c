#include <gtest/gtest.h>

#include <cmath>

#include "pdsphere/quadrature.hpp"

using pdsphere::gauss_legendre;

TEST(GaussLegendre, WeightsSumToTwoAndNodesSymmetric) {
  for (std::size_t n : {1u, 2u, 5u, 16u, 64u}) {
    const auto& r = gauss_legendre(n);
    ASSERT_EQ(r.size(), n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += r.weights[i];
      EXPECT_NEAR(r.nodes[i], -r.nodes[n - 1 - i], 1e-15);
    }
    EXPECT_NEAR(s, 2.0, 1e-14);
  }
}

TEST(GaussLegendre, ExactForDegreeTwoNMinusOne) {
  for (std::size_t n : {3u, 8u, 20u}) {
    const auto& r = gauss_legendre(n);
    for (std::size_t p = 0; p < 2 * n; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], static_cast<double>(p));
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1.0);
      EXPECT_NEAR(s, exact, 1e-14) << "n=" << n << " p=" << p;
    }
  }
}

TEST(GaussLegendre, TwoPointNodes) {
  const auto& r = gauss_legendre(2);
  EXPECT_DOUBLE_EQ(r.nodes[1], 1.0 / std::sqrt(3.0));
}

TEST(GaussLegendre, CachedRuleIsShared) {
  EXPECT_EQ(&gauss_legendre(12), &gauss_legendre(12));
  EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(GaussLegendre, MappedInterval) {
  const auto r = gauss_legendre(10).mapped(0.0, std::acos(-1.0));
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::sin(r.nodes[i]);
  EXPECT_NEAR(s, 2.0, 1e-12);
}
