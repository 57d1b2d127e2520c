#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "pdsphere/io.hpp"
#include "pdsphere/report.hpp"

using namespace pdsphere;

TEST(ParseAngle, AcceptedForms) {
  const double pi = std::numbers::pi;
  EXPECT_DOUBLE_EQ(io::parse_angle("1.25"), 1.25);
  EXPECT_DOUBLE_EQ(io::parse_angle("pi"), pi);
  EXPECT_DOUBLE_EQ(io::parse_angle("pi/3"), pi / 3);
  EXPECT_DOUBLE_EQ(io::parse_angle("2pi/3"), 2 * pi / 3);
  EXPECT_DOUBLE_EQ(io::parse_angle("2*pi/3"), 2 * pi / 3);
  EXPECT_DOUBLE_EQ(io::parse_angle("0.5*pi"), pi / 2);
  EXPECT_THROW(io::parse_angle(""), io::FormatError);
  EXPECT_THROW(io::parse_angle("pi/0"), io::FormatError);
  EXPECT_THROW(io::parse_angle("tau"), io::FormatError);
  EXPECT_THROW(io::parse_angle("pi*3"), io::FormatError);
}

TEST(MatrixIo, JsonRoundTrip) {
  SymmetricMatrix a(3);
  a(0, 1) = 0.1;
  a(2, 2) = -4.5;
  a(1, 2) = 1.0 / 3.0;
  const auto back = io::symmetric_from_json(io::parse_json(io::to_json(a).dump()));
  EXPECT_EQ(back.upper(), a.upper());
  const auto full = io::symmetric_from_json(io::rows_json(a));
  EXPECT_EQ(full.upper(), a.upper());
  EXPECT_THROW(io::symmetric_from_json(io::parse_json("[[1,2],[3,1]]")), io::FormatError);
  EXPECT_THROW(io::symmetric_from_json(io::parse_json("[[1,2,3],[2,1]]")), io::FormatError);
  EXPECT_THROW(io::parse_json("{\"dim\": "), io::FormatError);
}

TEST(MatrixIo, CsvRoundTripIsExact) {
  SymmetricMatrix a(2);
  a(0, 0) = 0.1 + 0.2;
  a(0, 1) = -1e-300;
  a(1, 1) = std::numbers::pi;
  const auto back = io::symmetric_from_csv(io::to_csv(a.to_full()));
  EXPECT_EQ(back.upper(), a.upper());
  EXPECT_THROW(io::symmetric_from_csv("1,2\n3\n"), io::FormatError);
}

TEST(PointIo, JsonAndCsv) {
  const PointConfiguration p(2, {{0.6, 0.8}, {-1.0, 0.0}});
  EXPECT_EQ(io::points_from_json(io::to_json(p)).points(), p.points());
  EXPECT_EQ(io::points_from_csv(io::to_csv(p)).points(), p.points());
  EXPECT_THROW(io::points_from_csv("1,0\n1\n"), io::FormatError);
  EXPECT_THROW(io::points_from_json(io::parse_json("{\"n\":2}")), io::FormatError);
}

TEST(PairIo, RoundTripAndValidation) {
  const auto pair = pair_from_points(sample_sphere(4, 5, 1));
  const auto back = io::pair_from_json(io::parse_json(io::to_json(pair).dump()));
  EXPECT_EQ(back.n, 4);
  EXPECT_LT(back.t.max_abs_diff(pair.t), 1e-16);
  auto j = io::to_json(pair);
  j["T"][0][0] = 0.5;
  EXPECT_THROW(io::pair_from_json(j), InfeasiblePairError);
  j["n"] = 1;
  EXPECT_THROW(io::pair_from_json(j), io::FormatError);
}

TEST(PolynomialIo, RoundTrip) {
  TPolynomial f(1, 2);
  f.by_tpow[0].add_term({1, 1}, 0.5);
  f.by_tpow[2].add_term({0, 0}, -2.0);
  int n = 0;
  const auto back = io::tpoly_from_json(io::to_json(f, 5), &n);
  EXPECT_EQ(n, 5);
  const std::vector<double> u{0.3}, v{-0.7};
  EXPECT_DOUBLE_EQ(back(0.4, u, v), f(0.4, u, v));
  auto j = io::to_json(f, 5);
  j["coeffs"][0]["tpow"] = 7;
  EXPECT_THROW(io::tpoly_from_json(j), io::FormatError);
}

TEST(CertificateIo, CsvHeaderAndRows) {
  BoundCertificate c;
  c.coefficients = {0.25, 1.0};
  EXPECT_EQ(io::certificate_csv(c), "k,f_k\n0,0.25\n1,1\n");
  c.per_omega[PartitionPattern({1, 1})] = 0.0;
  EXPECT_TRUE(io::to_json(c).at("per_omega").contains("(1,1)"));
}

TEST(RunReport, JsonSchemaAndReproducibleTimestamp) {
  setenv("SOURCE_DATE_EPOCH", "86400", 1);
  RunReport r;
  r.command = "demo";
  r.seed = 9;
  r.add("a", true, 1e-12, 1e-9);
  r.add("b", false, std::nan(""), 1e-9);
  r.skip("c");
  const auto j = to_json(r);
  EXPECT_EQ(j.at("timestamp"), "1970-01-02T00:00:00Z");
  EXPECT_EQ(j.at("checks").size(), 3u);
  EXPECT_EQ(j.at("checks")[1].at("metric"), "nan");
  EXPECT_EQ(j.at("summary").at("fail"), 1);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(to_csv(r).substr(0, 30), "name,status,metric,tolerance\na");
  unsetenv("SOURCE_DATE_EPOCH");
}
