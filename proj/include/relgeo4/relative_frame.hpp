#pragma once

/**
 * @file relative_frame.hpp
 * @brief Relative normalization and shape operator of a hypersurface in R^4.
 *
 * Given the jet of an immersion x(u1, u2, u3) and a support function q, the
 * frame at a chart point bundles
 *
 *  - the unit normal xi and the fundamental forms g, h, III,
 *  - the relative normal y = III^{ij} d_i q d_j xi + q xi,
 *  - the conormal X = xi / q and the relative metric G = h / q,
 *  - the B-form B_ij = <d_i y, d_j X> and the mixed shape operator B_i^j of
 *    the Weingarten equations d_i y = -B_i^j d_j x,
 *  - the curvature functions H, H2, K and principal curvatures.
 *
 * Matrices are indexed [i][j] with i the lower (row) index, so for the shape
 * operator `Bmix[i][j]` is B_i^j. Chart variables are 0-based.
 */

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "relgeo4/cubic.hpp"
#include "relgeo4/errors.hpp"
#include "relgeo4/expr.hpp"
#include "relgeo4/jet.hpp"
#include "relgeo4/linalg.hpp"

namespace relgeo4 {

template <int O = kDefaultJetOrder>
using VecJet = Vec4<Jet<O>>;

/// Guards. Singularity guards are absolute; residual tolerances live with
/// the checks that use them.
struct FrameTolerances {
  static constexpr double kDegenerate = 1e-12;
  static constexpr double kGaussCurvature = 1e-10;
  static constexpr double kSupport = 1e-10;
};

enum class NormalizationKind { Euclidean, Equiaffine, Custom };

struct NormalizationMode {
  NormalizationKind kind = NormalizationKind::Euclidean;
  Expression q;  // Custom only
  std::string q_source;

  static NormalizationMode euclidean() { return {}; }
  static NormalizationMode equiaffine() { return {NormalizationKind::Equiaffine, {}, {}}; }
  static NormalizationMode custom(std::string source) {
    Expression e = parse(source);
    return {NormalizationKind::Custom, std::move(e), std::move(source)};
  }
};

inline std::string to_string(NormalizationKind k) {
  switch (k) {
    case NormalizationKind::Euclidean: return "euclidean";
    case NormalizationKind::Equiaffine: return "equiaffine";
    case NormalizationKind::Custom: return "custom";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Vector-jet helpers

template <int O>
VecJet<O> eval_vec_jet(const std::array<Expression, 4>& x, const ChartPoint& p) {
  return {eval_jet<O>(x[0], p), eval_jet<O>(x[1], p), eval_jet<O>(x[2], p), eval_jet<O>(x[3], p)};
}

template <int O>
VecJet<O> derivative(const VecJet<O>& v, int i) {
  return {v[0].d(i), v[1].d(i), v[2].d(i), v[3].d(i)};
}

template <int O>
Vec4<double> values(const VecJet<O>& v) {
  return {v[0].value(), v[1].value(), v[2].value(), v[3].value()};
}

template <int O>
int order(const VecJet<O>& v) {
  return std::min(std::min(v[0].order(), v[1].order()), std::min(v[2].order(), v[3].order()));
}

template <int O>
Mat3<double> values(const Mat3<Jet<O>>& m) {
  Mat3<double> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = m[i][j].value();
  return out;
}

// ---------------------------------------------------------------------------
// Curvature functions

struct CurvatureSet {
  double H = 0.0;
  double H2 = 0.0;
  double K = 0.0;
  /// Descending when real_eigenvalues; see CubicRoots otherwise.
  std::array<double, 3> kappas{};
  bool real_eigenvalues = true;
  std::array<std::optional<double>, 3> radii{};
};

inline constexpr double kZeroCurvature = 1e-12;

inline std::array<std::optional<double>, 3> radii_of(const std::array<double, 3>& kappas, bool real) {
  std::array<std::optional<double>, 3> out{};
  if (!real) return out;
  for (int i = 0; i < 3; ++i)
    if (std::abs(kappas[i]) > kZeroCurvature) out[i] = 1.0 / kappas[i];
  return out;
}

/// H, H2, K of a mixed shape operator and its eigenvalues. The eigenvalues
/// solve k^3 - 3H k^2 + 3H2 k - K = 0; the depressed coefficients are taken
/// from the traceless part of Bmix, which keeps clustered roots accurate.
inline CurvatureSet curvature_functions(const Mat3<double>& b) {
  CurvatureSet c;
  c.H = trace(b) / 3.0;
  c.H2 = (b[0][0] * b[1][1] + b[1][1] * b[2][2] + b[2][2] * b[0][0] - b[0][1] * b[1][0] -
          b[1][2] * b[2][1] - b[0][2] * b[2][0]) /
         3.0;
  c.K = det(b);

  Mat3<double> dev = b;
  for (int i = 0; i < 3; ++i) dev[i][i] -= c.H;
  const double p = dev[0][0] * dev[1][1] + dev[1][1] * dev[2][2] + dev[2][2] * dev[0][0] -
                   dev[0][1] * dev[1][0] - dev[1][2] * dev[2][1] - dev[0][2] * dev[2][0];
  const double q = -det(dev);
  double scale = 1.0;
  for (const auto& row : b)
    for (double e : row) scale = std::fmax(scale, std::abs(e));
  CubicRoots r = solve_depressed_cubic(p, q, 1e-9 * scale);
  for (auto& t : r.roots) t += c.H;
  c.kappas = r.roots;
  c.real_eigenvalues = r.all_real;
  c.radii = radii_of(c.kappas, c.real_eigenvalues);
  return c;
}

// ---------------------------------------------------------------------------
// Frame construction

/// Unit normal orientation * cross4(d1 x, d2 x, d3 x) / |...| as a jet.
template <int O>
VecJet<O> unit_normal(const VecJet<O>& x, int orientation) {
  const VecJet<O> n = cross4(derivative(x, 0), derivative(x, 1), derivative(x, 2));
  const Jet<O> n2 = dot(n, n);
  if (!(std::sqrt(std::abs(n2.value())) >= FrameTolerances::kDegenerate))
    throw DegenerateImmersion("partial derivatives of x are linearly dependent");
  const Jet<O> inv_len = pow(n2, -0.5);
  return scaled(n, inv_len * static_cast<double>(orientation));
}

template <int O>
struct FundamentalForms {
  Mat3<Jet<O>> g;    // <d_i x, d_j x>
  Mat3<Jet<O>> h;    // <d_j d_i x, xi>
  Mat3<Jet<O>> III;  // <d_i xi, d_j xi>
  Jet<O> Ktilde;     // det h / det g
};

/// First, second and third fundamental forms. Throws SingularMetric or
/// VanishingGaussCurvature.
template <int O>
FundamentalForms<O> fundamental_forms(const VecJet<O>& x, const VecJet<O>& xi) {
  FundamentalForms<O> f;
  std::array<VecJet<O>, 3> dx{derivative(x, 0), derivative(x, 1), derivative(x, 2)};
  std::array<VecJet<O>, 3> dxi{derivative(xi, 0), derivative(xi, 1), derivative(xi, 2)};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      f.g[i][j] = f.g[j][i] = dot(dx[i], dx[j]);
      f.h[i][j] = f.h[j][i] = dot(derivative(dx[i], j), xi);
      f.III[i][j] = f.III[j][i] = dot(dxi[i], dxi[j]);
    }
  const Jet<O> det_g = det(f.g);
  if (det_g.value() < FrameTolerances::kDegenerate) throw SingularMetric("det g vanishes");
  f.Ktilde = det(f.h) / det_g;
  if (std::abs(f.Ktilde.value()) < FrameTolerances::kGaussCurvature)
    throw VanishingGaussCurvature("Gauss-Kronecker curvature vanishes (|K~| = " +
                                  error_number(std::abs(f.Ktilde.value())) + ")");
  return f;
}

/// Support function q as a jet: 1, |K~|^(1/5), or a user expression.
template <int O>
Jet<O> support_function(const NormalizationMode& mode, const Jet<O>& Ktilde, const ChartPoint& p) {
  Jet<O> q;
  switch (mode.kind) {
    case NormalizationKind::Euclidean: q = Jet<O>::constant(1.0, p); break;
    case NormalizationKind::Equiaffine: q = pow(abs(Ktilde), 1.0 / 5.0); break;
    case NormalizationKind::Custom: q = eval_jet<O>(mode.q, p); break;
  }
  if (std::abs(q.value()) < FrameTolerances::kSupport)
    throw ZeroSupport("support function vanishes (q = " + error_number(q.value()) + ")");
  return q;
}

template <int O>
bool is_constant(const Jet<O>& j) {
  const auto c = j.coefficients();
  for (std::size_t k = 1; k < c.size(); ++k)
    if (c[k] != 0.0) return false;
  return true;
}

/// Relative normal y = III^{ij} d_i q d_j xi + q xi.
///
/// The Beltrami term uses d_j xi as tangent basis: <d_i d_k xi, xi> =
/// -III_ik then cancels d_i q in the normal part of d_i y, which is what
/// makes d_i y tangent. With d_j x in its place that cancellation fails.
template <int O>
VecJet<O> relative_normal(const VecJet<O>& xi, const Jet<O>& q, const Mat3<Jet<O>>& III) {
  VecJet<O> y = scaled(xi, q);
  if (is_constant(q)) return y;
  const Jet<O> det_III = det(III);
  if (std::abs(det_III.value()) < FrameTolerances::kDegenerate) throw SingularThirdForm("det III vanishes");
  const Mat3<Jet<O>> III_inv = inverse(III);
  const std::array<Jet<O>, 3> dq{q.d(0), q.d(1), q.d(2)};
  for (int j = 0; j < 3; ++j) {
    Jet<O> coeff = III_inv[0][j] * dq[0] + III_inv[1][j] * dq[1] + III_inv[2][j] * dq[2];
    y = y + scaled(derivative(xi, j), coeff);
  }
  return y;
}

/// Everything the frame needs to report at its base point.
template <int O = kDefaultJetOrder>
struct RelativeFrame {
  ChartPoint point{};
  int orientation = 1;

  VecJet<O> x;
  VecJet<O> xi;
  VecJet<O> y;
  VecJet<O> X;

  double q = 0.0;
  double Ktilde = 0.0;
  Mat3<double> g{}, h{}, III{};
  Mat3<double> G{};            // h / q
  Mat3<double> B{};            // <d_i y, d_j X>
  Mat3<double> Bmix{};         // tangential least-squares solve of d_i y = -B_i^j d_j x
  Mat3<double> Bmix_raised{};  // G^{jk} B_ki
  CurvatureSet curvature;

  std::array<Vec4<double>, 3> dx{};
  std::array<Vec4<double>, 3> dy{};
  Vec4<double> position() const { return values(x); }
  Vec4<double> normal() const { return values(xi); }
  Vec4<double> relative_normal_value() const { return values(y); }
};

/// Solve d_i y = -M_i^j d_j x for M in the least-squares sense over the
/// tangent basis (4x3, column-pivoted QR).
inline Mat3<double> tangential_solve(const std::array<Vec4<double>, 3>& dx, const std::array<Vec4<double>, 3>& dy) {
  Eigen::Matrix<double, 4, 3> T;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 4; ++k) T(k, j) = dx[j][k];
  const auto qr = T.colPivHouseholderQr();
  Mat3<double> out;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector4d rhs;
    for (int k = 0; k < 4; ++k) rhs(k) = -dy[i][k];
    const Eigen::Vector3d m = qr.solve(rhs);
    for (int j = 0; j < 3; ++j) out[i][j] = m(j);
  }
  return out;
}

/// Frame of the hypersurface x normalized by a given y, with oriented unit
/// normal xi. Used for the base surface and for relatively parallel ones.
/// Needs x valid to order >= 2 and y to order >= 1.
template <int O>
RelativeFrame<O> assemble_frame(const VecJet<O>& x, const VecJet<O>& xi, const VecJet<O>& y, int orientation) {
  RelativeFrame<O> f;
  f.point = x[0].base_point();
  f.orientation = orientation;
  f.x = x;
  f.xi = xi;
  f.y = y;

  const Jet<O> q = dot(xi, y);
  f.q = q.value();
  if (std::abs(f.q) < FrameTolerances::kSupport)
    throw ZeroSupport("support function <xi, y> vanishes (q = " + error_number(f.q) + ")");
  f.X = scaled(xi, reciprocal(q));

  std::array<VecJet<O>, 3> dxj{derivative(x, 0), derivative(x, 1), derivative(x, 2)};
  std::array<Vec4<double>, 3> dX;
  std::array<Vec4<double>, 3> dxi;
  for (int i = 0; i < 3; ++i) {
    f.dx[i] = values(dxj[i]);
    f.dy[i] = values(derivative(y, i));
    dX[i] = values(derivative(f.X, i));
    dxi[i] = values(derivative(xi, i));
  }
  const Vec4<double> xi0 = values(xi);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      f.g[i][j] = dot(f.dx[i], f.dx[j]);
      f.h[i][j] = dot(values(derivative(dxj[i], j)), xi0);
      f.III[i][j] = dot(dxi[i], dxi[j]);
      f.G[i][j] = f.h[i][j] / f.q;
      f.B[i][j] = dot(f.dy[i], dX[j]);
    }
  const double det_g = det(f.g);
  if (det_g < FrameTolerances::kDegenerate) throw SingularMetric("det g vanishes");
  f.Ktilde = det(f.h) / det_g;
  if (std::abs(det(f.G)) < FrameTolerances::kDegenerate) throw SingularRelativeMetric("det G vanishes");

  f.Bmix = tangential_solve(f.dx, f.dy);
  const Mat3<double> G_inv = inverse(f.G);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += G_inv[j][k] * f.B[k][i];
      f.Bmix_raised[i][j] = s;
    }
  f.curvature = curvature_functions(f.Bmix);
  return f;
}

/// Orientation making h positive definite at p; for indefinite h, the one
/// with tr(g^{-1} h) >= 0.
inline int auto_orientation(const std::array<Expression, 4>& x, const ChartPoint& p) {
  const auto xj = eval_vec_jet<2>(x, p);
  const auto xi = unit_normal(xj, +1);
  const auto ff = fundamental_forms(xj, xi);
  const Mat3<double> h = values(ff.h);
  const double m1 = h[0][0];
  const double m2 = h[0][0] * h[1][1] - h[0][1] * h[1][0];
  const double m3 = det(h);
  if (m1 > 0 && m2 > 0 && m3 > 0) return +1;
  if (m1 < 0 && m2 > 0 && m3 < 0) return -1;
  const Mat3<double> gh = multiply(inverse(values(ff.g)), h);
  return trace(gh) >= 0.0 ? +1 : -1;
}

/// Full pipeline at one chart point: x -> xi -> (g, h, III, K~) -> q -> y -> frame.
template <int O = kDefaultJetOrder>
RelativeFrame<O> build_frame(const std::array<Expression, 4>& x_expr, const NormalizationMode& mode,
                             int orientation, const ChartPoint& p) {
  const VecJet<O> x = eval_vec_jet<O>(x_expr, p);
  const VecJet<O> xi = unit_normal(x, orientation);
  const FundamentalForms<O> ff = fundamental_forms(x, xi);
  const Jet<O> q = support_function(mode, ff.Ktilde, p);
  const VecJet<O> y = relative_normal(xi, q, ff.III);
  RelativeFrame<O> f = assemble_frame(x, xi, y, orientation);
  f.Ktilde = ff.Ktilde.value();
  return f;
}

// ---------------------------------------------------------------------------
// Residuals of the frame laws

struct FrameResiduals {
  double weingarten = 0.0;        // max_i |d_i y + B_i^j d_j x|
  double conormal_tangent = 0.0;  // max_i |<X, d_i x>|
  double conormal_unit = 0.0;     // |<X, y> - 1|
  double conormal_xi = 0.0;       // |q X - xi|
  double b_symmetry = 0.0;        // max |B_ij - B_ji|
  double tangency = 0.0;          // max_i |<d_i y, xi>|
  double index_raise = 0.0;       // max |Bmix - G^{-1} B|
  double g_relation = 0.0;        // max |<d_j d_i x, X> - h_ij / q|
  /// max |B_ij + <d_j d_i y, X>|, available when y is valid to order 2.
  std::optional<double> b_second_form;
};

template <int O>
FrameResiduals frame_residuals(const RelativeFrame<O>& f) {
  FrameResiduals r;
  const Vec4<double> X = values(f.X);
  const Vec4<double> xi = values(f.xi);
  const Vec4<double> y = values(f.y);
  for (int i = 0; i < 3; ++i) {
    Vec4<double> w = f.dy[i];
    for (int j = 0; j < 3; ++j) w = w + scaled(f.dx[j], f.Bmix[i][j]);
    r.weingarten = std::fmax(r.weingarten, norm(w));
    r.conormal_tangent = std::fmax(r.conormal_tangent, std::abs(dot(X, f.dx[i])));
    r.tangency = std::fmax(r.tangency, std::abs(dot(f.dy[i], xi)));
  }
  r.conormal_unit = std::abs(dot(X, y) - 1.0);
  r.conormal_xi = norm(scaled(X, f.q) - xi);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.b_symmetry = std::fmax(r.b_symmetry, std::abs(f.B[i][j] - f.B[j][i]));
  r.index_raise = max_abs_diff(f.Bmix, f.Bmix_raised);

  for (int i = 0; i < 3; ++i) {
    const VecJet<O> dxi_j = derivative(f.x, i);
    for (int j = 0; j < 3; ++j) {
      const double Gij = dot(values(derivative(dxi_j, j)), X);
      r.g_relation = std::fmax(r.g_relation, std::abs(Gij - f.h[i][j] / f.q));
    }
  }
  if (order(f.y) >= 2) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) {
      const VecJet<O> dyi = derivative(f.y, i);
      for (int j = 0; j < 3; ++j) m = std::fmax(m, std::abs(f.B[i][j] + dot(values(derivative(dyi, j)), X)));
    }
    r.b_second_form = m;
  }
  return r;
}

inline double max_residual(const FrameResiduals& r) {
  double m = std::fmax(r.weingarten, r.conormal_tangent);
  m = std::fmax(m, r.conormal_unit);
  m = std::fmax(m, r.conormal_xi);
  m = std::fmax(m, r.b_symmetry);
  m = std::fmax(m, r.tangency);
  m = std::fmax(m, r.index_raise);
  m = std::fmax(m, r.g_relation);
  if (r.b_second_form) m = std::fmax(m, *r.b_second_form);
  return m;
}

}  // namespace relgeo4
