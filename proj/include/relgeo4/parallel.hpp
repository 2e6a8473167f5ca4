#pragma once

// Relatively parallel hypersurfaces x_mu = x + mu y and their curvature
// functions, both in closed form and by recomputing the frame of x_mu.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "relgeo4/errors.hpp"
#include "relgeo4/linalg.hpp"
#include "relgeo4/relative_frame.hpp"

namespace relgeo4 {

inline constexpr double kOffsetSingular = 1e-10;

template <int O>
VecJet<O> offset_jet(const VecJet<O>& x, const VecJet<O>& y, double mu) {
  return x + scaled(y, mu);
}

/// A(mu) = det(I - mu B) = -mu^3 K + 3 mu^2 H2 - 3 mu H + 1.
inline double a_polynomial(const CurvatureSet& c, double mu) {
  return ((-c.K * mu + 3.0 * c.H2) * mu - 3.0 * c.H) * mu + 1.0;
}

/// A(mu), raising OffsetSingular when |A| < 1e-10 (mu is a focal distance).
inline double a_of_mu(const CurvatureSet& c, double mu) {
  const double a = a_polynomial(c, mu);
  if (std::abs(a) < kOffsetSingular)
    throw OffsetSingular("A(mu) vanishes at mu = " + error_number(mu) + " (focal distance)");
  return a;
}

/// A(mu) = -K (mu - R1)(mu - R2)(mu - R3); needs K != 0 and real radii.
inline std::optional<double> a_factored(const CurvatureSet& c, double mu) {
  if (!c.real_eigenvalues || !c.radii[0] || !c.radii[1] || !c.radii[2]) return std::nullopt;
  return -c.K * (mu - *c.radii[0]) * (mu - *c.radii[1]) * (mu - *c.radii[2]);
}

/// Mixed shape operator of the parallel hypersurface, component by
/// component from the closed-form solution of B = B*(I - mu B).
inline Mat3<double> star_shape_operator(const Mat3<double>& B, double mu) {
  const CurvatureSet c = curvature_functions(B);
  const double A = a_of_mu(c, mu);
  const double K = c.K;
  // b(i, j) = B_i^j with 1-based indices.
  auto b = [&](int i, int j) { return B[i - 1][j - 1]; };
  Mat3<double> s;
  s[0][0] = b(1, 1) - mu * (b(1, 1) * b(2, 2) + b(1, 1) * b(3, 3) - b(1, 2) * b(2, 1) - b(1, 3) * b(3, 1)) + mu * mu * K;
  s[0][1] = b(1, 2) + mu * (b(1, 3) * b(3, 2) - b(1, 2) * b(3, 3));
  s[0][2] = b(1, 3) + mu * (b(1, 2) * b(2, 3) - b(1, 3) * b(2, 2));
  s[1][0] = b(2, 1) + mu * (b(2, 3) * b(3, 1) - b(2, 1) * b(3, 3));
  s[1][1] = b(2, 2) - mu * (b(1, 1) * b(2, 2) + b(2, 2) * b(3, 3) - b(2, 3) * b(3, 2) - b(1, 2) * b(2, 1)) + mu * mu * K;
  s[1][2] = b(2, 3) + mu * (b(2, 1) * b(1, 3) - b(2, 3) * b(1, 1));
  s[2][0] = b(3, 1) + mu * (b(3, 2) * b(2, 1) - b(3, 1) * b(2, 2));
  s[2][1] = b(3, 2) + mu * (b(3, 1) * b(1, 2) - b(3, 2) * b(1, 1));
  s[2][2] = b(3, 3) - mu * (b(1, 1) * b(3, 3) + b(2, 2) * b(3, 3) - b(1, 3) * b(3, 1) - b(2, 3) * b(3, 2)) + mu * mu * K;
  for (auto& row : s)
    for (auto& e : row) e /= A;
  return s;
}

/// Same operator by solving B = B* (I - mu B) as a linear system.
inline Mat3<double> star_shape_operator_solve(const Mat3<double>& B, double mu) {
  Eigen::Matrix3d b, m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      b(i, j) = B[i][j];
      m(i, j) = (i == j ? 1.0 : 0.0) - mu * B[i][j];
    }
  // B* M = B  <=>  M^T B*^T = B^T
  const Eigen::Matrix3d star_t = m.transpose().partialPivLu().solve(b.transpose());
  Mat3<double> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = star_t(j, i);
  return out;
}

/// Curvature functions of the parallel hypersurface at distance mu.
inline CurvatureSet star_curvatures(const CurvatureSet& c, double mu) {
  const double A = a_of_mu(c, mu);
  CurvatureSet s;
  s.K = c.K / A;
  s.H2 = (-mu * c.K + c.H2) / A;
  s.H = (mu * mu * c.K - 2.0 * mu * c.H2 + c.H) / A;
  s.real_eigenvalues = c.real_eigenvalues;
  if (c.real_eigenvalues) {
    for (int i = 0; i < 3; ++i) {
      const double denom = 1.0 - mu * c.kappas[i];
      if (std::abs(denom) < kOffsetSingular)
        throw StarPrincipalUndefined("kappa_" + std::to_string(i + 1) + " = 1/mu");
      s.kappas[i] = c.kappas[i] / denom;
    }
    std::sort(s.kappas.begin(), s.kappas.end(), std::greater<>());
    for (int i = 0; i < 3; ++i) {
      if (std::abs(s.kappas[i]) > kZeroCurvature) s.radii[i] = 1.0 / s.kappas[i];
    }
  } else {
    // Complex pair: solve the starred characteristic cubic directly.
    CubicRoots r = solve_monic_cubic(-3.0 * s.H, 3.0 * s.H2, -s.K);
    s.kappas = r.roots;
  }
  return s;
}

/// J = (H2^2 - K H) / K^2, unchanged by any relatively parallel offset.
inline double invariant_J(const CurvatureSet& c) {
  if (std::abs(c.K) < kZeroCurvature) throw ZeroRelativeCurvature("K vanishes");
  return (c.H2 * c.H2 - c.K * c.H) / (c.K * c.K);
}

/// mu = H2/K - H2*/K*, the relative distance recovered from both surfaces.
inline double mu_from_ratio(const CurvatureSet& c, const CurvatureSet& star) {
  if (std::abs(c.K) < kZeroCurvature || std::abs(star.K) < kZeroCurvature)
    throw ZeroRelativeCurvature("K or K* vanishes");
  return c.H2 / c.K - star.H2 / star.K;
}

/// Largest component of d_i x_mu normal to span{d_1 x, d_2 x, d_3 x}.
template <int O>
double peterson_check(const VecJet<O>& x, const VecJet<O>& y, double mu) {
  const VecJet<O> xm = offset_jet(x, y, mu);
  Eigen::Matrix<double, 4, 3> T;
  for (int j = 0; j < 3; ++j) {
    const Vec4<double> dj = values(derivative(x, j));
    for (int k = 0; k < 4; ++k) T(k, j) = dj[k];
  }
  const auto qr = T.colPivHouseholderQr();
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec4<double> v = values(derivative(xm, i));
    Eigen::Vector4d w(v[0], v[1], v[2], v[3]);
    const Eigen::Vector4d resid = w - T * qr.solve(w);
    worst = std::fmax(worst, resid.norm());
  }
  return worst;
}

/// Frame of x_mu normalized by the same y, recomputed from scratch. The
/// cross product of d_i x_mu is A(mu) times that of d_i x, so the normal of
/// x_mu is flipped by sign(A); this keeps q* = <xi*, y> equal to q.
template <int O>
RelativeFrame<O> parallel_frame(const RelativeFrame<O>& base, double mu) {
  const double A = a_of_mu(base.curvature, mu);
  const VecJet<O> xm = offset_jet(base.x, base.y, mu);
  const int orientation = base.orientation * (A > 0 ? 1 : -1);
  const VecJet<O> xi_star = unit_normal(xm, orientation);
  return assemble_frame(xm, xi_star, base.y, orientation);
}

struct SharedQuantities {
  double support = 0.0;  // |q* - q|
  double conormal = 0.0; // |X* - X|
  double b_form = 0.0;   // max |B*_ij - B_ij| (B-form of x_mu vs x)
  double relative_image = 0.0; // |y* - y|, zero by construction
  double max() const { return std::fmax(std::fmax(support, conormal), std::fmax(b_form, relative_image)); }
};

/// Deviations of the quantities a relatively parallel hypersurface shares
/// with its base: relative image, support function, conormal and B-form.
template <int O>
SharedQuantities shared_quantities_check(const RelativeFrame<O>& frame, const RelativeFrame<O>& star) {
  SharedQuantities s;
  s.support = std::abs(star.q - frame.q);
  s.conormal = norm(values(star.X) - values(frame.X));
  s.b_form = max_abs_diff(star.B, frame.B);
  s.relative_image = norm(values(star.y) - values(frame.y));
  return s;
}

struct IdentitySides {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  /// |lhs - rhs| / max(1, |lhs|, |rhs|)
  double residual() const {
    return std::abs(lhs - rhs) / std::fmax(1.0, std::fmax(std::abs(lhs), std::abs(rhs)));
  }
};

/// The six polynomial identities linking A(mu) and the starred curvatures:
/// A(1 + 3mu H*) = 2mu^3 K - 3mu^2 H2 + 1,  A(1 - 3mu^2 H2*) = 2mu^3 K - 3mu H + 1,
/// A(2 + 3mu H*) = mu^3 K - 3mu H + 2,      A(1 + mu^3 K*) = 3mu^2 H2 - 3mu H + 1,
/// A(1 - mu^2 H2*) = 2mu^2 H2 - 3mu H + 1,  A(1 + mu H*) = mu^2 H2 - 2mu H + 1.
inline std::array<IdentitySides, 6> pointwise_identities(const CurvatureSet& c, double mu) {
  const double A = a_of_mu(c, mu);
  const CurvatureSet s = star_curvatures(c, mu);
  const double m2 = mu * mu, m3 = m2 * mu;
  return {{
      {"A(1+3mu*H*)", A * (1.0 + 3.0 * mu * s.H), 2.0 * m3 * c.K - 3.0 * m2 * c.H2 + 1.0},
      {"A(1-3mu^2*H2*)", A * (1.0 - 3.0 * m2 * s.H2), 2.0 * m3 * c.K - 3.0 * mu * c.H + 1.0},
      {"A(2+3mu*H*)", A * (2.0 + 3.0 * mu * s.H), m3 * c.K - 3.0 * mu * c.H + 2.0},
      {"A(1+mu^3*K*)", A * (1.0 + m3 * s.K), 3.0 * m2 * c.H2 - 3.0 * mu * c.H + 1.0},
      {"A(1-mu^2*H2*)", A * (1.0 - m2 * s.H2), 2.0 * m2 * c.H2 - 3.0 * mu * c.H + 1.0},
      {"A(1+mu*H*)", A * (1.0 + mu * s.H), m2 * c.H2 - 2.0 * mu * c.H + 1.0},
  }};
}

/// Relation between the curvatures of a surface and of any relatively
/// parallel one, with mu eliminated through mu = H2/K - H2*/K*.
/// `scale` is the sum of the absolute values of all expanded terms.
struct ClosingIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;
  /// |lhs - rhs| / scale: zero when both sides vanish identically.
  double residual() const { return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0; }
};

inline ClosingIdentity closing_identity(const CurvatureSet& c, const CurvatureSet& s) {
  const double K = c.K, H2 = c.H2, H = c.H;
  const double Ks = s.K, H2s = s.H2, Hs = s.H;
  const std::array<double, 4> left{K * Ks * H2s * K * K * H2s, 3.0 * K * Ks * Ks * H2s * Hs * H2 * H2,
                                   -3.0 * K * Ks * Ks * H2s * Hs * K * H, -K * K * K * H2s * H2s * H2s * Hs};
  const double k3 = Ks * Ks * Ks;
  const std::array<double, 5> right{k3 * 2.0 * H2 * H2 * H2 * Hs, k3 * K * H2 * H2, -k3 * 3.0 * K * H2 * H * Hs,
                                    k3 * K * K * Hs, -k3 * K * K * H};
  ClosingIdentity out;
  for (double t : left) {
    out.lhs += t;
    out.scale += std::abs(t);
  }
  for (double t : right) {
    out.rhs += t;
    out.scale += std::abs(t);
  }
  return out;
}

/// Semigroup law: offsetting by mu1 then mu2 equals offsetting by mu1 + mu2.
inline double semigroup_residual(const CurvatureSet& c, double mu1, double mu2) {
  const CurvatureSet a = star_curvatures(star_curvatures(c, mu1), mu2);
  const CurvatureSet b = star_curvatures(c, mu1 + mu2);
  auto rel = [](double x, double y) { return std::abs(x - y) / std::fmax(1.0, std::fmax(std::abs(x), std::abs(y))); };
  return std::fmax(rel(a.K, b.K), std::fmax(rel(a.H2, b.H2), rel(a.H, b.H)));
}

}  // namespace relgeo4
