#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pdsphere/gegenbauer.hpp"

using namespace pdsphere;

namespace {

// Integral of (1-|u|^2)^a over the unit ball in R^m.
double ball_moment(int m, double a) {
  if (m == 0) return 1.0;
  if (m == 1) return std::sqrt(std::numbers::pi) * std::tgamma(a + 1.0) / std::tgamma(a + 1.5);
  return std::numbers::pi / (a + 1.0);
}

// The integrand factors: with P = (1-|u|^2)(1-|v|^2), the (u, v) part is
// P^{(k+l+n-m-2)/2} and the remaining t-integral is one-dimensional.
double closed_form(int n, int m, int k, int l) {
  const double a = 0.5 * (k + l + n - m - 2);
  const double b = ball_moment(m, a);
  return b * b * gegenbauer_inner_product(n - m, k, l);
}

const UVWeight unit_weight = [](std::span<const double>, std::span<const double>) { return 1.0; };

} // namespace

TEST(OrthogonalityQuad, OffDiagonalVanishes) {
  for (int n = 4; n <= 6; ++n) {
    for (int m = 0; m <= 2; ++m) {
      for (int k = 0; k <= 3; ++k) {
        const double diag = orthogonality_quad(n, m, k, k, unit_weight);
        for (int l = k + 1; l <= 4; ++l) {
          EXPECT_LT(std::abs(orthogonality_quad(n, m, k, l, unit_weight)), 1e-8 * diag)
              << "n=" << n << " m=" << m << " k=" << k << " l=" << l;
        }
      }
    }
  }
}

TEST(OrthogonalityQuad, DiagonalMatchesClosedForm) {
  for (int n = 4; n <= 7; ++n) {
    for (int m = 0; m <= 2; ++m) {
      for (int k = 0; k <= 4; ++k) {
        const double expected = closed_form(n, m, k, k);
        EXPECT_NEAR(orthogonality_quad(n, m, k, k, unit_weight) / expected, 1.0, 1e-8)
            << "n=" << n << " m=" << m << " k=" << k;
      }
    }
  }
}

TEST(OrthogonalityQuad, PolynomialWeightInUV) {
  // q(u,v) = 1 + u1 v1 + u1^2: still orthogonal for k != l.
  const UVWeight q = [](std::span<const double> u, std::span<const double> v) {
    return 1.0 + u[0] * v[0] + u[0] * u[0];
  };
  const double diag = orthogonality_quad(5, 1, 2, 2, q);
  EXPECT_GT(diag, 0.0);
  EXPECT_LT(std::abs(orthogonality_quad(5, 1, 1, 3, q)), 1e-8 * diag);
  EXPECT_LT(std::abs(orthogonality_quad(6, 2, 0, 2, q)), 1e-8 * diag);
}

TEST(OrthogonalityQuad, RejectsHighLevel) {
  EXPECT_THROW(orthogonality_quad(6, 3, 1, 1, unit_weight), std::invalid_argument);
}

TEST(OrthogonalityMc, OffDiagonalIsStatisticallyZero) {
  const auto est = orthogonality_mc(5, 1, 1, 2, nullptr, 200000, 17);
  EXPECT_LT(std::abs(est.z_score()), 4.0);
  EXPECT_EQ(est.samples, 200000u);
}

TEST(OrthogonalityMc, LevelZeroNormMatchesRatio) {
  // With the normalized sphere measure, E[G_k(<x,y>)^2] = <G_k, G_k> / <1, 1>.
  const int n = 5, k = 2;
  const double expected = gegenbauer_inner_product(n, k, k) / gegenbauer_inner_product(n, 0, 0);
  const auto est = orthogonality_mc(n, 0, k, k, nullptr, 200000, 3);
  EXPECT_LT(std::abs(est.mean - expected), 4.0 * est.standard_error);
}

TEST(OrthogonalityMc, RejectsTinySampleCount) {
  EXPECT_THROW(orthogonality_mc(5, 1, 1, 2, nullptr, 10, 1), std::invalid_argument);
}
