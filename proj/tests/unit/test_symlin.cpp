#include <gtest/gtest.h>

#include <cmath>

#include "pdsphere/random.hpp"
#include "pdsphere/symlin.hpp"

using namespace pdsphere;

namespace {

SymmetricMatrix min_matrix() {
  SymmetricMatrix a(5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i; j < 5; ++j) a(i, j) = static_cast<double>(std::min(i, j) + 1);
  return a;
}

SymmetricMatrix random_gram(std::size_t count, std::size_t dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  PointConfiguration p(dim);
  for (std::size_t i = 0; i < count; ++i) {
    Vector v(dim);
    for (auto& x : v) x = rng.normal();
    p.push_back(v);
  }
  return gram(p);
}

} // namespace

TEST(SymmetricMatrix, PackedStorageIsSymmetric) {
  SymmetricMatrix a(3);
  a(0, 2) = 4.0;
  EXPECT_EQ(a(2, 0), 4.0);
  EXPECT_EQ(a.upper().size(), 6u);
  const auto f = a.to_full();
  EXPECT_EQ(f(2, 0), f(0, 2));
}

TEST(SymmetricMatrix, FromFullRejectsAsymmetric) {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(SymmetricMatrix::from_full(m), std::invalid_argument);
  m(1, 0) = 1.0;
  EXPECT_NO_THROW(SymmetricMatrix::from_full(m));
}

TEST(SymmetricMatrix, ZeroDimensionRejected) {
  EXPECT_THROW(SymmetricMatrix(0), std::invalid_argument);
}

TEST(Eigen, MinMatrixReferenceSpectrum) {
  // Roots of x^5 - 15x^4 + 35x^3 - 28x^2 + 9x - 1, computed to 20 digits.
  const double expected[] = {0.27155412933882117944, 0.35325328289373854055, 0.58296449829374048888,
                             1.4486905697966425769, 12.343537519677057214};
  const auto values = eigenvalues(min_matrix());
  ASSERT_EQ(values.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(values[i], expected[i], 1e-12 * expected[4]);
}

TEST(Eigen, DecompositionReconstructs) {
  const auto a = random_gram(7, 4, 99) + SymmetricMatrix::identity(7);
  const auto e = eigen_decompose(a);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) {
      double s = 0.0, orth = 0.0;
      for (std::size_t c = 0; c < 7; ++c) {
        s += e.vectors(i, c) * e.values[c] * e.vectors(j, c);
        orth += e.vectors(c, i) * e.vectors(c, j);
      }
      EXPECT_NEAR(s, a(i, j), 1e-12);
      EXPECT_NEAR(orth, i == j ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(Psd, GramIsPsdAndRankMatchesDimension) {
  const auto g = random_gram(10, 3, 5);
  EXPECT_TRUE(is_psd(g).is_psd);
  EXPECT_EQ(psd_rank(g), 3u);
}

TEST(Psd, DetectsNegativeEigenvalue) {
  SymmetricMatrix a(2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  a(0, 1) = 1.5;
  const auto r = is_psd(a);
  EXPECT_FALSE(r.is_psd);
  EXPECT_NEAR(r.min_eigenvalue, -0.5, 1e-14);
  EXPECT_THROW(psd_rank(a), NotPsdError);
  try {
    realize(a);
  } catch (const NotPsdError& e) {
    EXPECT_NEAR(e.report().min_eigenvalue, -0.5, 1e-14);
  }
}

TEST(Psd, ToleranceIsRelativeToScale) {
  SymmetricMatrix a(2);
  a(0, 0) = 1e6;
  a(1, 1) = -1e-3;
  EXPECT_TRUE(is_psd(a, 1e-8).is_psd);
  EXPECT_FALSE(is_psd(a, 1e-10).is_psd);
  EXPECT_THROW(is_psd(a, -1.0), std::invalid_argument);
}

TEST(Hadamard, SchurProductOfPsdIsPsd) {
  const auto a = random_gram(8, 3, 1), b = random_gram(8, 2, 2);
  const auto h = hadamard(a, b);
  EXPECT_DOUBLE_EQ(h(1, 4), a(1, 4) * b(1, 4));
  EXPECT_TRUE(is_psd(h).is_psd);
  EXPECT_THROW(hadamard(a, random_gram(3, 2, 2)), std::invalid_argument);
}

TEST(Congruence, IdentityAndShape) {
  const auto a = random_gram(4, 4, 3);
  EXPECT_LT(congruence(Matrix::identity(4), a).max_abs_diff(a), 1e-15);
  Matrix w(2, 4);
  w(0, 0) = 1.0;
  w(1, 2) = 2.0;
  const auto c = congruence(w, a);
  ASSERT_EQ(c.dim(), 2u);
  EXPECT_NEAR(c(0, 1), 2.0 * a(0, 2), 1e-15);
  EXPECT_NEAR(c(1, 1), 4.0 * a(2, 2), 1e-15);
}

TEST(Outer, RankOne) {
  const std::vector<double> h{1.0, -2.0, 3.0};
  const auto o = outer(h);
  EXPECT_EQ(o(1, 2), -6.0);
  EXPECT_EQ(psd_rank(o), 1u);
}

TEST(Realize, RoundTripsGram) {
  const auto g = random_gram(9, 4, 17);
  const auto p = realize(g);
  EXPECT_EQ(p.ambient_dim(), 4u);
  EXPECT_LT(gram(p).max_abs_diff(g), 1e-12 * g.max_abs_entry());
}
