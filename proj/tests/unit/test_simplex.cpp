#include <gtest/gtest.h>

#include "pdsphere/simplex.hpp"

using namespace pdsphere;

TEST(Simplex, TextbookMaximization) {
  LinearProgram lp;
  lp.c = {-3.0, -5.0};
  lp.add_row({1.0, 0.0}, Relation::less_equal, 4.0);
  lp.add_row({0.0, 2.0}, Relation::less_equal, 12.0);
  lp.add_row({3.0, 2.0}, Relation::less_equal, 18.0);
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, -36.0, 1e-12);
  EXPECT_NEAR(r.x[0], 2.0, 1e-12);
  EXPECT_NEAR(r.x[1], 6.0, 1e-12);
}

TEST(Simplex, EqualityAndGreaterEqualRows) {
  LinearProgram lp;
  lp.c = {1.0, 1.0};
  lp.add_row({1.0, 2.0}, Relation::equal, 4.0);
  lp.add_row({1.0, -1.0}, Relation::greater_equal, -1.0);
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, 7.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.x[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.x[1], 5.0 / 3.0, 1e-12);
}

TEST(Simplex, NegativeRightHandSide) {
  // x >= 3 written as -x <= -3
  LinearProgram lp;
  lp.c = {1.0};
  lp.add_row({-1.0}, Relation::less_equal, -3.0);
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
}

TEST(Simplex, DetectsInfeasible) {
  LinearProgram lp;
  lp.c = {1.0};
  lp.add_row({1.0}, Relation::greater_equal, 2.0);
  lp.add_row({1.0}, Relation::less_equal, 1.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::infeasible);
}

TEST(Simplex, DetectsUnbounded) {
  LinearProgram lp;
  lp.c = {-1.0, 0.0};
  lp.add_row({1.0, -1.0}, Relation::less_equal, 1.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::unbounded);
}

TEST(Simplex, BealeCyclingExampleTerminates) {
  LinearProgram lp;
  lp.c = {-0.75, 150.0, -0.02, 6.0};
  lp.add_row({0.25, -60.0, -0.04, 9.0}, Relation::less_equal, 0.0);
  lp.add_row({0.5, -90.0, -0.02, 3.0}, Relation::less_equal, 0.0);
  lp.add_row({0.0, 0.0, 1.0, 0.0}, Relation::less_equal, 1.0);
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, -0.05, 1e-12);
  EXPECT_NEAR(r.x[0], 0.04, 1e-12);
  EXPECT_NEAR(r.x[2], 1.0, 1e-12);
}

TEST(Simplex, RedundantEqualityRows) {
  LinearProgram lp;
  lp.c = {1.0, 2.0};
  lp.add_row({1.0, 1.0}, Relation::equal, 1.0);
  lp.add_row({2.0, 2.0}, Relation::equal, 2.0);
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
}

TEST(Simplex, ShapeErrors) {
  LinearProgram lp;
  lp.c = {1.0, 1.0};
  lp.add_row({1.0}, Relation::less_equal, 1.0);
  EXPECT_THROW(solve_lp(lp), std::invalid_argument);
  EXPECT_STREQ(to_string(LpStatus::unbounded), "unbounded");
}
