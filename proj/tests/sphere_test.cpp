#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "trispec/errors.hpp"
#include "trispec/sphere.hpp"

using namespace trispec;

namespace {

constexpr double kPi = std::numbers::pi;

bool degree_triangle(std::int64_t a, std::int64_t b, std::int64_t c) {
  return c <= a + b && a <= b + c && b <= a + c;
}

}  // namespace

TEST(ThreeJ, TableValues) {
  EXPECT_NEAR(three_j_zero({1, 1, 2}), std::sqrt(2.0 / 15.0), 1e-12);
  EXPECT_NEAR(three_j_zero({1, 1, 0}), -1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(three_j_zero({2, 2, 2}), -std::sqrt(2.0 / 35.0), 1e-12);
  EXPECT_EQ(three_j_zero({1, 1, 1}), 0.0);
  EXPECT_EQ(three_j_zero({1, 1, 3}), 0.0);
  EXPECT_NEAR(three_j_zero({0, 0, 0}), 1.0, 1e-15);
}

TEST(ThreeJ, MatchesRacahSum) {
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; b <= 12; ++b)
      for (int c = 0; c <= 24; ++c) {
        const double ref = oracle::racah_three_j(a, b, c, 0, 0, 0);
        EXPECT_NEAR(three_j_zero({a, b, c}), ref, 1e-13) << a << ' ' << b << ' ' << c;
      }
}

TEST(ThreeJ, PermutationInvariant) {
  for (int a = 0; a <= 50; ++a)
    for (int b = a; b <= 50; ++b)
      for (int c = b; c <= 50; ++c) {
        const double ref = three_j_zero({a, b, c});
        ASSERT_EQ(three_j_zero({a, c, b}), ref);
        ASSERT_EQ(three_j_zero({b, a, c}), ref);
        ASSERT_EQ(three_j_zero({b, c, a}), ref);
        ASSERT_EQ(three_j_zero({c, a, b}), ref);
        ASSERT_EQ(three_j_zero({c, b, a}), ref);
      }
}

TEST(ThreeJ, Orthogonality) {
  for (int a = 0; a <= 200; ++a)
    for (int b = 0; b <= 200; ++b) {
      long double sum = 0.0L;
      for (int c = std::abs(a - b); c <= a + b; ++c) {
        const long double w = three_j_zero({a, b, c});
        sum += (2 * c + 1) * w * w;
      }
      ASSERT_LE(std::abs(static_cast<double>(sum) - 1.0), 1e-10) << a << ' ' << b;
    }
}

TEST(ThreeJ, LargeDegreesStayFinite) {
  const double v = three_j_zero({5000, 5000, 5000});
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NE(v, 0.0);
  EXPECT_THROW((void)three_j_zero({kMaxDegree + 1, 1, kMaxDegree}), ResourceError);
  EXPECT_THROW((void)three_j_zero({-1, 1, 1}), DomainError);
}

TEST(LogFactorial, SmallValues) {
  EXPECT_EQ(log_factorial(0), 0.0L);
  EXPECT_EQ(log_factorial(1), 0.0L);
  EXPECT_NEAR(static_cast<double>(log_factorial(10)), std::log(3628800.0), 1e-14);
  EXPECT_NEAR(static_cast<double>(log_factorial(1000)), std::lgamma(1001.0), 1e-10);
}

TEST(Gaunt, Examples) {
  EXPECT_NEAR(gaunt_square_sum({1, 1, 2}), 3.0 / (2.0 * kPi), 1e-14);
  EXPECT_EQ(gaunt_square_sum({1, 1, 3}), 0.0);
  EXPECT_NEAR(gaunt_square_sum({0, 0, 0}), 1.0 / (4.0 * kPi), 1e-15);
}

TEST(Gaunt, MatchesHarmonicQuadrature) {
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int c = 0; c <= 3; ++c)
        EXPECT_NEAR(gaunt_square_sum({a, b, c}), oracle::quadrature_gaunt_square_sum(a, b, c),
                    1e-8)
            << a << ' ' << b << ' ' << c;
}

TEST(Gaunt, CompletenessSumRule) {
  for (int a : {0, 1, 7, 40, 150})
    for (int b : {0, 3, 20, 99}) {
      long double sum = 0.0L;
      for (int c = std::abs(a - b); c <= a + b; ++c) sum += gaunt_square_sum({a, b, c});
      const double expect = (2.0 * a + 1) * (2.0 * b + 1) / (4.0 * kPi);
      EXPECT_NEAR(static_cast<double>(sum) / expect, 1.0, 1e-10);
    }
}

TEST(Gaunt, ExactZeroOnBadDegreeTriples) {
  for (int a = 0; a <= 60; ++a)
    for (int b = 0; b <= 60; ++b)
      for (int c = 0; c <= 125; ++c)
        if (!degree_triangle(a, b, c)) ASSERT_EQ(gaunt_square_sum({a, b, c}), 0.0);
}

TEST(SphereMeasure, SmallDegreeCutoff) {
  const auto m = sphere_measure(2);
  EXPECT_EQ(m.manifold(), ManifoldDescriptor::sphere2());
  EXPECT_NEAR(m.manifold().volume, 4.0 * kPi, 1e-14);
  // brute-force: triples with l_i <= 2, even sum, degree triangle
  std::size_t expect = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c)
        if ((a + b + c) % 2 == 0 && degree_triangle(a, b, c)) ++expect;
  EXPECT_EQ(m.atoms().size(), expect);
  EXPECT_EQ(expect, 11u);

  const auto* atom = m.find({1, 1, 2});
  ASSERT_NE(atom, nullptr);
  EXPECT_NEAR(atom->weight, 3.0 / (2.0 * kPi), 1e-14);
  EXPECT_DOUBLE_EQ(atom->freqs.t3, std::sqrt(6.0));
}

TEST(SphereMeasure, AtomsObeySelectionRules) {
  const auto m = sphere_measure(30);
  for (const auto& a : m.atoms()) {
    EXPECT_TRUE(passes_selection_rule({a.key[0], a.key[1], a.key[2]}));
    EXPECT_GT(a.weight, 0.0);
    EXPECT_EQ(a.weight, gaunt_square_sum({a.key[0], a.key[1], a.key[2]}));
  }
  EXPECT_THROW((void)sphere_measure(kMaxSphereDegree + 1), ResourceError);
}
