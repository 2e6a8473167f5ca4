#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "relgeo4.hpp"

namespace testing_support {

using Scalar3 = std::function<double(double, double, double)>;

/// Five-point central difference of f along variable i at p.
inline double fd1(const Scalar3& f, std::array<double, 3> p, int i, double h = 1e-3) {
  auto at = [&](double s) {
    auto q = p;
    q[static_cast<std::size_t>(i)] += s;
    return f(q[0], q[1], q[2]);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

/// Second partial d^2 f / du_i du_j by nested five-point stencils.
inline double fd2(const Scalar3& f, std::array<double, 3> p, int i, int j, double h = 1e-3) {
  if (i == j) {
    auto at = [&](double s) {
      auto q = p;
      q[static_cast<std::size_t>(i)] += s;
      return f(q[0], q[1], q[2]);
    };
    return (-at(2 * h) + 16 * at(h) - 30 * at(0) + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
  }
  Scalar3 g = [&](double a, double b, double c) { return fd1(f, {a, b, c}, j, h); };
  return fd1(g, p, i, h);
}

inline bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::fmax(1.0, std::abs(b)); }

inline std::string sphere_text(double r, const std::string& normalization, const std::string& orientation = "\"auto\"") {
  const std::string R = relgeo4::format_double(r);
  return "[surface]\nname = \"sphere\"\n"
         "x1 = \"" + R + "*cos(u1)*cos(u2)*cos(u3)\"\n"
         "x2 = \"" + R + "*sin(u1)*cos(u2)*cos(u3)\"\n"
         "x3 = \"" + R + "*sin(u2)*cos(u3)\"\n"
         "x4 = \"" + R + "*sin(u3)\"\n"
         "u1 = [0.2, 1.2]\nu2 = [-0.5, 0.5]\nu3 = [-0.5, 0.5]\n"
         "[normalization]\n" + normalization + "\norientation = " + orientation + "\n";
}

inline constexpr std::array<double, 4> kEllipsoidAxes{1.0, 1.2, 1.5, 2.0};

inline std::string ellipsoid_text(const std::string& normalization) {
  return "[surface]\nname = \"ellipsoid\"\n"
         "x1 = \"cos(u1)*cos(u2)*cos(u3)\"\n"
         "x2 = \"1.2*sin(u1)*cos(u2)*cos(u3)\"\n"
         "x3 = \"1.5*sin(u2)*cos(u3)\"\n"
         "x4 = \"2*sin(u3)\"\n"
         "u1 = [0.2, 1.2]\nu2 = [-0.5, 0.5]\nu3 = [-0.5, 0.5]\n"
         "[normalization]\n" + normalization + "\n";
}

inline relgeo4::SurfaceSpec sphere(double r, const std::string& normalization = "mode = \"euclidean\"") {
  return relgeo4::load_spec_text(sphere_text(r, normalization));
}

inline relgeo4::SurfaceSpec ellipsoid(const std::string& normalization = "mode = \"euclidean\"") {
  return relgeo4::load_spec_text(ellipsoid_text(normalization));
}

}  // namespace testing_support
