#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "relgeo4/cubic.hpp"

using namespace relgeo4;

TEST(Cubic, ThreeDistinctRoots) {
  // (t - 1)(t - 2)(t - 3) = t^3 - 6t^2 + 11t - 6
  const CubicRoots r = solve_monic_cubic(-6.0, 11.0, -6.0);
  ASSERT_TRUE(r.all_real);
  EXPECT_NEAR(r.roots[0], 3.0, 1e-14);
  EXPECT_NEAR(r.roots[1], 2.0, 1e-14);
  EXPECT_NEAR(r.roots[2], 1.0, 1e-14);
}

TEST(Cubic, TripleRoot) {
  const CubicRoots r = solve_monic_cubic(-3.0, 3.0, -1.0);
  ASSERT_TRUE(r.all_real);
  for (double t : r.roots) EXPECT_NEAR(t, 1.0, 1e-12);
}

TEST(Cubic, OneRealRoot) {
  // (t - 2)(t^2 + 1)
  const CubicRoots r = solve_monic_cubic(-2.0, 1.0, -2.0);
  ASSERT_FALSE(r.all_real);
  EXPECT_NEAR(r.roots[0], 2.0, 1e-14);
  EXPECT_NEAR(r.roots[1], 0.0, 1e-14);
  EXPECT_NEAR(r.imaginary, 1.0, 1e-14);
}

TEST(Cubic, DoubleRoot) {
  // (t - 1)^2 (t + 2) = t^3 - 3t + 2
  const CubicRoots r = solve_depressed_cubic(-3.0, 2.0, 1e-9);
  ASSERT_TRUE(r.all_real);
  EXPECT_NEAR(r.roots[0], 1.0, 1e-7);
  EXPECT_NEAR(r.roots[1], 1.0, 1e-7);
  EXPECT_NEAR(r.roots[2], -2.0, 1e-14);
}

TEST(Cubic, RandomRootsRecovered) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 1000; ++n) {
    double a = u(gen), b = u(gen), c = u(gen);
    const CubicRoots r = solve_monic_cubic(-(a + b + c), a * b + b * c + c * a, -a * b * c);
    ASSERT_TRUE(r.all_real);
    for (double t : r.roots) {
      const double p = (t - a) * (t - b) * (t - c);
      EXPECT_LT(std::abs(p), 1e-9);
    }
    EXPECT_GE(r.roots[0], r.roots[1]);
    EXPECT_GE(r.roots[1], r.roots[2]);
  }
}
