#pragma once

// Real roots of cubics. Three real roots go through the trigonometric
// formula, one real root through Cardano; real roots come back sorted in
// descending order.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace relgeo4 {

struct CubicRoots {
  /// Descending when all_real. Otherwise roots[0] is the real root and
  /// roots[1] == roots[2] hold the real part of the complex pair.
  std::array<double, 3> roots{};
  bool all_real = true;
  /// Imaginary part of the complex pair (0 when all_real).
  double imaginary = 0.0;
};

/// Roots of t^3 + p t + q = 0. A complex pair whose imaginary part is at
/// most `real_tolerance` is reported as a real double root.
inline CubicRoots solve_depressed_cubic(double p, double q, double real_tolerance = 0.0) {
  CubicRoots out;
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;

  if (disc <= 0.0) {
    if (p >= 0.0) {
      // disc <= 0 with p >= 0 forces p == q == 0.
      out.roots = {0.0, 0.0, 0.0};
      return out;
    }
    const double m = 2.0 * std::sqrt(-third_p);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    constexpr double kTwoPiOver3 = 2.0 * std::numbers::pi / 3.0;
    out.roots = {m * std::cos(theta), m * std::cos(theta - kTwoPiOver3), m * std::cos(theta - 2.0 * kTwoPiOver3)};
  } else {
    // Pick the sign that avoids cancellation inside the cube root.
    const double s = std::cbrt(std::abs(half_q) + std::sqrt(disc));
    const double a = half_q > 0.0 ? -s : s;
    const double b = a != 0.0 ? -third_p / a : 0.0;
    const double real = a + b;
    const double re_pair = -0.5 * real;
    const double im_pair = 0.5 * std::numbers::sqrt3 * std::abs(a - b);
    out.roots = {real, re_pair, re_pair};
    if (im_pair > real_tolerance) {
      out.all_real = false;
      out.imaginary = im_pair;
      return out;
    }
  }
  std::sort(out.roots.begin(), out.roots.end(), std::greater<>());
  return out;
}

/// Roots of t^3 + a2 t^2 + a1 t + a0 = 0.
inline CubicRoots solve_monic_cubic(double a2, double a1, double a0, double real_tolerance = 0.0) {
  const double shift = a2 / 3.0;
  const double p = a1 - a2 * shift;
  const double q = a0 - a1 * shift + 2.0 * shift * shift * shift;
  CubicRoots r = solve_depressed_cubic(p, q, real_tolerance);
  for (auto& t : r.roots) t -= shift;
  return r;
}

}  // namespace relgeo4
