#include <gtest/gtest.h>

#include <cmath>

#include "pdsphere/spherical.hpp"

using namespace pdsphere;

TEST(SampleSphere, DeterministicUnitPoints) {
  const auto a = sample_sphere(5, 40, 9), b = sample_sphere(5, 40, 9), c = sample_sphere(5, 40, 10);
  EXPECT_EQ(a.points(), b.points());
  EXPECT_NE(a.points(), c.points());
  EXPECT_LT(a.max_norm_deviation(), 1e-14);
  EXPECT_THROW(sample_sphere(1, 3, 0), std::invalid_argument);
  EXPECT_THROW(sample_sphere(3, 0, 0), std::invalid_argument);
}

TEST(NamedCodes, SimplexInnerProducts) {
  for (int n : {1, 2, 3, 6}) {
    const auto s = simplex_code(n);
    ASSERT_EQ(s.size(), static_cast<std::size_t>(n) + 1);
    const auto g = gram(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(g(i, i), 1.0, 1e-14);
      for (std::size_t j = i + 1; j < s.size(); ++j) EXPECT_NEAR(g(i, j), -1.0 / n, 1e-14);
    }
  }
}

TEST(NamedCodes, IcosahedronAndCrossPolytope) {
  const auto ico = icosahedron();
  ASSERT_EQ(ico.size(), 12u);
  const auto g = gram(ico);
  int near = 0;
  for (std::size_t j = 1; j < 12; ++j) {
    const double t = g(0, j);
    EXPECT_TRUE(std::abs(std::abs(t) - 1.0 / std::sqrt(5.0)) < 1e-14 || std::abs(t + 1.0) < 1e-14);
    near += std::abs(t - 1.0 / std::sqrt(5.0)) < 1e-14;
  }
  EXPECT_EQ(near, 5);
  EXPECT_EQ(cross_polytope(4).size(), 8u);
  EXPECT_EQ(named_code("cross_polytope(3)").points(), cross_polytope(3).points());
  EXPECT_EQ(named_code("simplex(4)").size(), 5u);
  EXPECT_EQ(named_code("icosahedron").size(), 12u);
  EXPECT_THROW(named_code("dodecahedron"), std::invalid_argument);
  EXPECT_THROW(named_code("simplex(x)"), std::invalid_argument);
  EXPECT_THROW(named_code("simplex()"), std::invalid_argument);
}

TEST(ChangeBasis, PreservesGramAndAlignsAnchors) {
  const auto p = sample_sphere(5, 12, 4);
  const std::vector<Vector> anchors{p[0], p[1]};
  const auto q = change_basis(p, anchors);
  EXPECT_LT(gram(q).max_abs_diff(gram(p)), 1e-13);
  EXPECT_NEAR(q[0][0], 1.0, 1e-14);
  EXPECT_NEAR(q[0][1], 0.0, 1e-14);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(q[i][0], dot(p[i], p[0]), 1e-14);
  EXPECT_THROW(change_basis(p, {p[0], p[0]}), std::invalid_argument);
}

TEST(Project, TakesPrefixes) {
  const auto p = cross_polytope(3);
  const auto pr = project(p, 2);
  ASSERT_EQ(pr[1].size(), 2u);
  EXPECT_EQ(pr[1][0], -1.0);
  EXPECT_THROW(project(p, 4), std::invalid_argument);
}

TEST(KernelMatrix, LowDegreeIdentities) {
  const auto p = sample_sphere(6, 15, 21);
  const auto k0 = kernel_matrix(p, 2, 0);
  EXPECT_DOUBLE_EQ(k0.base(3, 7), 1.0);
  const auto k1 = kernel_matrix(p, 0, 1);
  EXPECT_LT(k1.base.max_abs_diff(gram(p)), 1e-15);
  // Diagonal: G_k^{(n,m)}(1, u, u) = (1 - |u|^2)^k
  const auto k3 = kernel_matrix(p, 2, 3);
  for (std::size_t i = 0; i < p.size(); ++i)
    EXPECT_NEAR(k3.base(i, i), std::pow(1.0 - norm2(p.prefix(i, 2)), 3), 1e-13);
  EXPECT_EQ(k3.m, 2);
  EXPECT_EQ(k3.n, 6);
}

TEST(KernelMatrix, PositiveSemidefiniteAtEveryLevel) {
  for (int n = 3; n <= 7; ++n) {
    const auto p = sample_sphere(n, 30, 100 + n);
    for (int m = 0; m <= n - 2; ++m)
      for (int k = 0; k <= 6; ++k) EXPECT_TRUE(is_psd(kernel_matrix(p, m, k).base).is_psd) << n << m << k;
  }
}

TEST(KernelMatrix, FactorizedFormAgrees) {
  const auto p = sample_sphere(7, 25, 8);
  for (int m = 0; m <= 4; ++m)
    for (int k = 0; k <= 5; ++k)
      EXPECT_LT(kernel_matrix(p, m, k).base.max_abs_diff(factorized_kernel(p, m, k)), 1e-10);
  // Anchors themselves have vanishing tail.
  EXPECT_THROW(factorized_kernel(cross_polytope(4), 1, 2), std::invalid_argument);
}

TEST(KernelMatrix, DuplicatedPointsStayPsd) {
  auto p = sample_sphere(4, 6, 2);
  p.push_back(p[0]);
  p.push_back(p[0]);
  EXPECT_TRUE(is_psd(kernel_matrix(p, 1, 3).base).is_psd);
}

TEST(KernelMatrix, RejectsBadInput) {
  const auto p = sample_sphere(4, 5, 1);
  EXPECT_THROW(kernel_matrix(p, 3, 1), std::invalid_argument);
  EXPECT_THROW(kernel_matrix(p, 1, -1), std::invalid_argument);
  PointConfiguration q(3, {{2.0, 0.0, 0.0}});
  EXPECT_THROW(kernel_matrix(q, 0, 1), std::invalid_argument);
}

TEST(BvMatrices, AnchoredKernelsAndCongruences) {
  const auto p = sample_sphere(5, 10, 13);
  const std::vector<double> w{1.0, 0.5, 0.25};
  const auto bv = bv_matrices(p, 2, 2, w);
  ASSERT_EQ(bv.a.size(), p.size());
  for (std::size_t l = 0; l < p.size(); ++l) {
    const auto framed = change_basis(p, {p[l]});
    EXPECT_LT(bv.a[l].max_abs_diff(kernel_matrix(framed, 1, 2).base), 1e-12);
    EXPECT_TRUE(is_psd(bv.y[l]).is_psd);
    EXPECT_EQ(bv.y[l].dim(), 3u);
  }
  EXPECT_TRUE(is_psd(bv.sum).is_psd);
  EXPECT_THROW(bv_matrices(p, 2, 2, {1.0}), std::invalid_argument);
}

TEST(ExpansionMatrix, PsdCoefficientMatricesGivePsdKernel) {
  SplitMix64 rng(6);
  const int n = 5, m = 2, d = 2;
  const std::size_t zlen = monomial_exponents(2, d).size();
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<SymmetricMatrix> h;
    for (int k = 0; k <= 3; ++k) {
      PointConfiguration f(zlen);
      for (int c = 0; c < 3; ++c) {
        Vector v(zlen);
        for (auto& x : v) x = rng.normal();
        f.push_back(v);
      }
      // Gram of the columns: W^T W, PSD of rank <= 3.
      SymmetricMatrix g(zlen);
      for (std::size_t a = 0; a < zlen; ++a)
        for (std::size_t b = a; b < zlen; ++b)
          for (std::size_t c = 0; c < 3; ++c) g(a, b) += f[c][a] * f[c][b];
      h.push_back(g);
    }
    const auto p = sample_sphere(n, 30, 50 + rep);
    EXPECT_TRUE(verify_corollary31(p, m, h, d).is_psd);
  }
}

TEST(ExpansionMatrix, ConstantCoefficientReducesToKernel) {
  const auto p = sample_sphere(5, 8, 3);
  std::vector<SymmetricMatrix> h(3, SymmetricMatrix(1, 0.0));
  h[2](0, 0) = 1.0;
  EXPECT_LT(expansion_matrix(p, 1, h, 0).max_abs_diff(kernel_matrix(p, 1, 2).base), 1e-15);
}

TEST(ExpansionMatrix, RejectsIndefiniteCoefficients) {
  const auto p = sample_sphere(5, 8, 3);
  SymmetricMatrix bad(3, 0.0);
  bad(0, 0) = 1.0;
  bad(1, 1) = -1.0;
  EXPECT_THROW(expansion_matrix(p, 1, {bad}, 2), NotPsdError);
  EXPECT_THROW(expansion_matrix(p, 1, {SymmetricMatrix(2)}, 2), std::invalid_argument);
}
