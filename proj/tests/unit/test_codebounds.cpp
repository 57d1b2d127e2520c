#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pdsphere/codebounds.hpp"
#include "pdsphere/spherical.hpp"

using namespace pdsphere;

namespace {

constexpr double pi = std::numbers::pi;

PartitionPattern pat(std::vector<int> p) { return PartitionPattern(std::move(p)); }

} // namespace

TEST(Patterns, PartitionCounts) {
  const std::size_t expected[] = {1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77};
  for (int d = 1; d <= 12; ++d) EXPECT_EQ(enumerate_patterns(d).size(), expected[d - 1]) << d;
  const auto p4 = enumerate_patterns(4);
  EXPECT_EQ(p4.front(), pat({4}));
  EXPECT_EQ(p4.back(), pat({1, 1, 1, 1}));
  EXPECT_THROW(enumerate_patterns(0), std::invalid_argument);
  EXPECT_THROW(enumerate_patterns(13), std::invalid_argument);
}

TEST(Patterns, ParseAndPrint) {
  EXPECT_EQ(PartitionPattern::parse("(2,1,1)"), pat({2, 1, 1}));
  EXPECT_EQ(PartitionPattern::parse("3"), pat({3}));
  EXPECT_EQ(pat({2, 2}).to_string(), "(2,2)");
  EXPECT_THROW(PartitionPattern::parse("1,2"), std::invalid_argument);
  EXPECT_THROW(PartitionPattern::parse("2,x"), std::invalid_argument);
  EXPECT_THROW(pat({0}), std::invalid_argument);
}

TEST(Patterns, PatternOfTuple) {
  const std::vector<int> j{4, 1, 4, 2, 1, 4};
  EXPECT_EQ(pattern_of(j), pat({3, 2, 1}));
  const std::vector<int> same{7, 7};
  EXPECT_EQ(pattern_of(same), pat({2}));
}

TEST(Counting, ReferenceValuesFromEnumeration) {
  // q_w(N) = #{J in [N]^d with pattern w} / N, by direct enumeration.
  EXPECT_EQ(q_omega(pat({3}), 5), 1u);
  EXPECT_EQ(q_omega(pat({2, 1}), 5), 12u);
  EXPECT_EQ(q_omega(pat({1, 1, 1}), 5), 12u);
  EXPECT_EQ(q_omega(pat({2, 1}), 8), 21u);
  EXPECT_EQ(q_omega(pat({1, 1, 1}), 8), 42u);
  const std::vector<std::pair<PartitionPattern, std::uint64_t>> d4n8{
      {pat({4}), 1}, {pat({3, 1}), 28}, {pat({2, 2}), 21}, {pat({2, 1, 1}), 252}, {pat({1, 1, 1, 1}), 210}};
  for (const auto& [w, v] : d4n8) EXPECT_EQ(q_omega(w, 8), v) << w.to_string();
}

TEST(Counting, ClosedFormMatchesBruteForce) {
  for (int d = 1; d <= 5; ++d) {
    for (std::uint64_t n = 1; n <= 8; ++n) {
      const auto brute = q_tilde_brute(d, n);
      std::uint64_t total = 0;
      for (const auto& w : enumerate_patterns(d)) {
        const auto it = brute.find(w);
        const std::uint64_t count = it == brute.end() ? 0 : it->second;
        EXPECT_EQ(q_tilde(w, n), count) << "d=" << d << " N=" << n << " " << w.to_string();
        EXPECT_EQ(q_omega(w, n) * n, count);
        EXPECT_DOUBLE_EQ(q_omega_real(w, static_cast<double>(n)), static_cast<double>(q_omega(w, n)));
        total += q_omega(w, n);
      }
      EXPECT_EQ(total, static_cast<std::uint64_t>(std::pow(n, d - 1)));
    }
  }
}

TEST(Counting, OverflowAndRangeChecks) {
  EXPECT_THROW(q_omega(pat({1, 1}), 0), std::invalid_argument);
  EXPECT_THROW(q_omega(pat({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}), 1ULL << 40), std::overflow_error);
  EXPECT_THROW(q_tilde_brute(8, 10), std::invalid_argument);
}

TEST(PairwiseEntries, LexicographicIndex) {
  EXPECT_EQ(pair_index(0, 1, 4), 0u);
  EXPECT_EQ(pair_index(0, 3, 4), 2u);
  EXPECT_EQ(pair_index(1, 2, 4), 3u);
  EXPECT_EQ(pair_index(3, 2, 4), 5u);
  EXPECT_THROW(pair_index(1, 1, 4), std::out_of_range);
}

TEST(PairwiseEntries, PatternFromInnerProducts) {
  const double theta = pi / 3;
  const std::vector<double> merged{1.0, 0.2, 0.2}; // x01 = 1
  EXPECT_EQ(pattern_of_x(merged, 3, theta), pat({2, 1}));
  const std::vector<double> all{1.0, 1.0, 1.0};
  EXPECT_EQ(pattern_of_x(all, 3, theta), pat({3}));
  const std::vector<double> none{-0.1, 0.5, -1.0};
  EXPECT_EQ(pattern_of_x(none, 3, theta), pat({1, 1, 1}));
  const std::vector<double> bad{0.9, 0.0, 0.0};
  EXPECT_THROW(pattern_of_x(bad, 3, theta), std::domain_error);
  EXPECT_THROW(pattern_of_x(all, 4, theta), std::invalid_argument);
}

TEST(GegenbauerSeries, ExpansionRoundTripAndDerivative) {
  const UnivariatePolynomial p({0.3, -1.0, 2.0, 0.5, -0.25});
  const auto g = gegenbauer_expand(p, 5);
  for (double t : {-1.0, -0.4, 0.2, 1.0}) {
    EXPECT_NEAR(g(t), p(t), 1e-14);
    EXPECT_NEAR(g.to_polynomial()(t), p(t), 1e-14);
    EXPECT_NEAR(g.derivative(t), p.derivative()(t), 1e-13);
  }
  EXPECT_NEAR(g.at_one(), p(1.0), 1e-14);
}

TEST(Nonpositivity, FindsInteriorMaximum) {
  // -(t - 0.3)^2 + 1e-6 peaks at 0.3 with value 1e-6.
  const UnivariatePolynomial p({1e-6 - 0.09, 0.6, -1.0});
  const auto r = verify_nonpositive(p, std::acos(0.5));
  EXPECT_FALSE(r.ok);
  EXPECT_NEAR(r.argmax, 0.3, 1e-9);
  EXPECT_NEAR(r.max_value, 1e-6, 1e-15);
  EXPECT_TRUE(verify_nonpositive(p, std::acos(0.2)).ok);
  EXPECT_THROW(verify_nonpositive(p, 0.0), std::invalid_argument);
}

TEST(Delsarte, ClassicalExamples) {
  for (int n = 3; n <= 8; ++n) {
    // t(t+1) <= 0 on [-1, 0]: bound 2n, attained by the cross-polytope.
    const UnivariatePolynomial f({0.0, 1.0, 1.0});
    const double b = delsarte_bound(f, n, pi / 2);
    EXPECT_NEAR(b, 2.0 * n, 1e-9);
    EXPECT_GE(b + 1e-9, static_cast<double>(cross_polytope(n).size()));
  }
  EXPECT_NEAR(delsarte_bound(UnivariatePolynomial({1.0, 1.0}), 4, pi), 2.0, 1e-15);
  EXPECT_NEAR(delsarte_bound(two_point_certificate(4, pi / 2), pi / 2), 8.0, 1e-12);
}

TEST(Delsarte, ScaleInvariant) {
  const auto g = two_point_certificate(5, 2.0);
  GegenbauerSeries h = g;
  for (auto& c : h.f) c *= 3.5;
  EXPECT_NEAR(delsarte_bound(g, 2.0), delsarte_bound(h, 2.0), 1e-12);
}

TEST(Delsarte, RejectsInvalidCertificates) {
  EXPECT_THROW(delsarte_bound(UnivariatePolynomial({1.0, 1.0}), 4, pi / 2), CertificateError);
  EXPECT_THROW(delsarte_bound(GegenbauerSeries{4, {1.0, -0.5}}, pi / 2), CertificateError);
  EXPECT_THROW(delsarte_bound(GegenbauerSeries{4, {0.0, 1.0}}, pi), CertificateError);
  EXPECT_THROW(two_point_certificate(3, pi / 3), CertificateError);
}

TEST(DelsarteLp, MatchesReferenceOptima) {
  // Optima of the same grid program from an independent interior-point solver.
  struct Case {
    int n;
    double theta;
    int degree;
    double reference;
  };
  const Case cases[] = {{3, pi / 3, 9, 13.177627766819652}, {3, pi / 3, 8, 13.244183580894859},
                        {3, pi / 3, 10, 13.158329346728287}, {3, pi / 2, 4, 6.0},
                        {4, pi / 2, 4, 8.0},                 {4, pi / 3, 9, 25.55842767657428},
                        {5, pi / 3, 9, 46.34591364799363}};
  for (const auto& c : cases) {
    const auto cert = delsarte_lp(c.n, c.theta, c.degree, 4096);
    // Undo the post-verification shrink of f_0 to recover the grid optimum.
    const double grid_optimum = (cert.f_diag + cert.shrink) / (cert.f0 + cert.shrink);
    EXPECT_NEAR(grid_optimum, c.reference, 1e-7 * c.reference) << c.n << " " << c.degree;
    EXPECT_LE(cert.shrink, 1e-6);
    EXPECT_GE(cert.bound, c.reference - 1e-9);
    EXPECT_TRUE(verify_nonpositive(GegenbauerSeries{c.n, cert.coefficients}, c.theta).ok);
    EXPECT_EQ(cert.integer_bound, static_cast<std::int64_t>(std::floor(cert.bound + 1e-12)));
  }
}

TEST(DelsarteLp, ImprovesWithDegreeAndCoversIcosahedron) {
  const double b8 = delsarte_lp(3, pi / 3, 8, 4096).bound;
  const auto c9 = delsarte_lp(3, pi / 3, 9, 4096);
  EXPECT_LE(c9.bound, b8);
  EXPECT_GE(c9.bound, 12.0);
  EXPECT_LT(c9.bound, 14.0);
  EXPECT_GE(c9.integer_bound, static_cast<std::int64_t>(icosahedron().size()));
  for (double c : c9.coefficients) EXPECT_GE(c, -1e-12);
}

TEST(DelsarteLp, ArgumentChecks) {
  EXPECT_THROW(delsarte_lp(2, pi / 3, 5, 4096), std::invalid_argument);
  EXPECT_THROW(delsarte_lp(3, pi / 3, 0, 4096), std::invalid_argument);
  EXPECT_THROW(delsarte_lp(3, pi / 3, 5, 10), std::invalid_argument);
  EXPECT_THROW(delsarte_lp(3, pi, 5, 4096), std::invalid_argument);
}

TEST(Theorem61, LevelZeroEqualsDelsarte) {
  const auto g = two_point_certificate(6, 1.9);
  const double direct = delsarte_bound(g, 1.9);
  const auto r = theorem61_bound(0, g.f[0], g.at_one(), {{pat({1, 1}), -0.2}});
  EXPECT_EQ(r.real_bound, direct);
  EXPECT_EQ(r.n, static_cast<std::int64_t>(std::floor(direct)));
}

TEST(Theorem61, LevelOneClosedForm) {
  // f0 N^2 <= f_diag + B_(2,1) 3(N-1) + B_(1,1,1) (N-1)(N-2) with 1/3, 2, 2/3, 0: N <= 6.
  const auto r = theorem61_bound(1, 1.0 / 3.0, 2.0, {{pat({2, 1}), 2.0 / 3.0}, {pat({1, 1, 1}), 0.0}});
  EXPECT_EQ(r.n, 6);
  EXPECT_NEAR(r.real_bound, 6.0, 1e-9);
  EXPECT_LT(r.residual_n1, 0.0);
}

TEST(Theorem61, LevelTwoWithOnlyDiagonal) {
  // Only B_(4) = f_diag: f0 N^3 <= f_diag, so N = floor(cbrt(f_diag / f0)).
  std::map<PartitionPattern, double> b;
  for (const auto& w : enumerate_patterns(4))
    if (w.groups() > 1) b[w] = -1.0;
  const auto r = theorem61_bound(2, 1.0, 30.0, b);
  EXPECT_EQ(r.n, 3);
  EXPECT_NEAR(r.real_bound, std::cbrt(30.0), 1e-9);
}

TEST(Theorem61, Errors) {
  EXPECT_THROW(theorem61_bound(1, 1.0, 2.0, {{pat({2, 1}), 0.5}}), std::invalid_argument);
  EXPECT_THROW(theorem61_bound(0, 0.0, 2.0, {{pat({1, 1}), 0.0}}), std::invalid_argument);
  EXPECT_THROW(theorem61_bound(0, 1.0, 2.0, {{pat({1, 1}), 1.5}}), std::domain_error);
}

TEST(EstimateB, DiagonalPatternIsExact) {
  const auto lc = lift_certificate(two_point_certificate(4, pi / 2), 1, pi / 2);
  const auto e = estimate_B(pat({3}), lc.problem(), 10, 1);
  EXPECT_DOUBLE_EQ(e.value, lc.f_diag);
}

TEST(EstimateB, ApproachesKnownSupremumFromBelow) {
  const CodeProblem prob{3, pi / 3, 1, [](std::span<const double> x) { return x[pair_index(1, 2, 3)]; }, 1.0};
  const auto small = estimate_B(pat({1, 1, 1}), prob, 100, 7);
  const auto large = estimate_B(pat({1, 1, 1}), prob, 1000, 7);
  EXPECT_LE(small.value, large.value);
  EXPECT_LE(large.value, 0.5 + 1e-12);
  EXPECT_GT(large.value, 0.49);
  EXPECT_EQ(pattern_of_x(large.argmax, 3, pi / 3), pat({1, 1, 1}));
}

TEST(EstimateB, LiftedUpperBoundsHold) {
  for (int m = 1; m <= 2; ++m) {
    const auto lc = lift_certificate(two_point_certificate(4, pi / 2), m, pi / 2);
    for (const auto& w : enumerate_patterns(m + 2)) {
      const auto e = estimate_B(w, lc.problem(), 200, 3);
      EXPECT_LE(e.value, lc.b_upper.at(w) + 1e-12) << w.to_string();
    }
  }
  const CodeProblem wrong{3, pi / 3, 1, [](std::span<const double>) { return 0.0; }, 1.0};
  EXPECT_THROW(estimate_B(pat({2, 2}), wrong, 10, 1), std::invalid_argument);
}

TEST(LiftedBound, ReproducesTwoPointBound) {
  for (int m = 0; m <= 2; ++m) {
    const auto cert = lifted_bound(lift_certificate(two_point_certificate(4, pi / 2), m, pi / 2));
    EXPECT_EQ(cert.integer_bound, 8) << m;
    EXPECT_NEAR(cert.bound, 8.0, 1e-9);
  }
}

TEST(Codes, AuditAndGreedy) {
  EXPECT_TRUE(code_audit(cross_polytope(4), pi / 2).valid);
  EXPECT_FALSE(code_audit(cross_polytope(4), 2 * pi / 3).valid);
  EXPECT_TRUE(code_audit(icosahedron(), std::acos(1.0 / std::sqrt(5.0))).valid);
  const auto code = greedy_code(3, pi / 3, 5);
  const auto audit = code_audit(code, pi / 3);
  EXPECT_TRUE(audit.valid);
  EXPECT_GE(code.size(), 6u);
  EXPECT_LE(static_cast<double>(code.size()), delsarte_lp(3, pi / 3, 9, 4096).bound);
}
