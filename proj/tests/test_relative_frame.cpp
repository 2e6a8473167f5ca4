#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"

using namespace relgeo4;
using testing_support::ellipsoid;
using testing_support::kEllipsoidAxes;
using testing_support::sphere;

namespace {

const std::vector<ChartPoint> kSamplePoints{{0.3, -0.2, 0.1}, {0.7, 0.35, -0.4}, {1.1, -0.45, 0.45}};

double max_abs_entry(const Mat3<double>& m, const Mat3<double>& ref) { return max_abs_diff(m, ref); }

Mat3<double> scaled_identity(double s) { return {{{s, 0, 0}, {0, s, 0}, {0, 0, s}}}; }

// Euclidean principal curvatures of the ellipsoid sum x_i^2 / a_i^2 = 1 at
// the point x, from the implicit form: eigenvalues of P Hess(F) P / |grad F|
// on the tangent space, with the inward normal.
std::array<double, 3> implicit_ellipsoid_curvatures(const Vec4<double>& x) {
  Eigen::Vector4d grad;
  Eigen::Matrix4d hess = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i) {
    const double a2 = kEllipsoidAxes[i] * kEllipsoidAxes[i];
    grad(i) = 2.0 * x[i] / a2;
    hess(i, i) = 2.0 / a2;
  }
  const Eigen::Vector4d n = grad.normalized();
  const Eigen::Matrix4d P = Eigen::Matrix4d::Identity() - n * n.transpose();
  const Eigen::Matrix4d S = P * hess * P / grad.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(S);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  // The normal direction contributes the zero eigenvalue, which sorts last.
  return {ev[0], ev[1], ev[2]};
}

}  // namespace

TEST(Sphere, EuclideanShapeOperatorIsInverseRadius) {
  for (double r : {0.5, 1.0, 2.0}) {
    const SurfaceSpec s = sphere(r);
    for (const auto& p : kSamplePoints) {
      const auto f = build_frame<4>(s.x, s.normalization, s.orientation, p);
      EXPECT_LT(max_abs_entry(f.Bmix, scaled_identity(1.0 / r)), 1e-12) << "r=" << r;
      EXPECT_NEAR(f.curvature.H, 1.0 / r, 1e-12);
      EXPECT_NEAR(f.curvature.H2, 1.0 / (r * r), 1e-12);
      EXPECT_NEAR(f.curvature.K, 1.0 / (r * r * r), 1e-12);
      ASSERT_TRUE(f.curvature.radii[0].has_value());
      EXPECT_NEAR(*f.curvature.radii[1], r, 1e-11);
    }
  }
}

TEST(Sphere, AutoOrientationPointsInward) {
  const SurfaceSpec s = sphere(2.0);
  for (const auto& p : kSamplePoints) {
    const auto f = build_frame<4>(s.x, s.normalization, s.orientation, p);
    const Vec4<double> x = f.position();
    const Vec4<double> xi = f.normal();
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(xi[k], -x[k] / 2.0, 1e-14);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(dot(xi, f.dx[i]), 0.0, 1e-14);
    EXPECT_NEAR(norm(xi), 1.0, 1e-15);
  }
}

TEST(Sphere, ConstantSupportScalesShapeOperator) {
  for (double r : {0.5, 1.0, 2.0})
    for (double c : {1.0, 0.5, 2.0}) {
      const SurfaceSpec s = sphere(r, "mode = \"custom\"\nq = \"" + format_double(c) + "\"");
      for (const auto& p : kSamplePoints) {
        const auto f = build_frame<4>(s.x, s.normalization, s.orientation, p);
        EXPECT_LT(max_abs_entry(f.Bmix, scaled_identity(c / r)), 1e-7) << r << " " << c;
        EXPECT_NEAR(f.curvature.H, c / r, 1e-7);
        EXPECT_NEAR(f.curvature.H2, (c / r) * (c / r), 1e-7);
        EXPECT_NEAR(f.curvature.K, std::pow(c / r, 3), 1e-7);
        const Vec4<double> y = f.relative_normal_value(), xi = f.normal();
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(y[k], c * xi[k], 1e-14);
      }
    }
}

TEST(Sphere, EquiaffineUnitSphereHasUnitSupport) {
  const SurfaceSpec s = sphere(1.0, "mode = \"equiaffine\"");
  for (const auto& p : kSamplePoints) {
    const auto f = build_frame<4>(s.x, s.normalization, s.orientation, p);
    EXPECT_NEAR(f.Ktilde, 1.0, 1e-12);
    EXPECT_NEAR(f.q, 1.0, 1e-12);
    EXPECT_LT(max_abs_entry(f.Bmix, scaled_identity(1.0)), 1e-10);
  }
}

TEST(Ellipsoid, EuclideanCurvaturesMatchImplicitOracle) {
  const SurfaceSpec s = ellipsoid();
  for (const auto& p : kSamplePoints) {
    const auto f = build_frame<4>(s.x, s.normalization, s.orientation, p);
    const auto k = implicit_ellipsoid_curvatures(f.position());
    ASSERT_TRUE(f.curvature.real_eigenvalues);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(f.curvature.kappas[i], k[i], 1e-10);
    EXPECT_NEAR(f.curvature.K, k[0] * k[1] * k[2], 1e-10);
    EXPECT_NEAR(f.curvature.H, (k[0] + k[1] + k[2]) / 3.0, 1e-10);
  }
}

TEST(Ellipsoid, EquiaffineNormalIsCentroaffine) {
  // The affine normal of an ellipsoid centred at the origin is -lambda x,
  // lambda = (a1 a2 a3 a4)^(-2/5); the shape operator is lambda I.
  const double lambda = std::pow(kEllipsoidAxes[0] * kEllipsoidAxes[1] * kEllipsoidAxes[2] * kEllipsoidAxes[3], -0.4);
  const SurfaceSpec s = ellipsoid("mode = \"equiaffine\"");
  for (const auto& p : kSamplePoints) {
    const auto f = build_frame<4>(s.x, s.normalization, s.orientation, p);
    const Vec4<double> x = f.position(), y = f.relative_normal_value();
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(y[k], -lambda * x[k], 1e-10);
    EXPECT_LT(max_abs_entry(f.Bmix, scaled_identity(lambda)), 1e-9);
  }
}

TEST(FrameLaws, HoldForEveryNormalization) {
  const std::vector<SurfaceSpec> specs{ellipsoid(), ellipsoid("mode = \"equiaffine\""),
                                       ellipsoid("mode = \"custom\"\nq = \"1 + 0.1*sin(u1)\""), sphere(1.0),
                                       sphere(0.5, "mode = \"custom\"\nq = \"1 + 0.2*u1*u2\"")};
  for (const auto& s : specs)
    for (const auto& p : kSamplePoints) {
      const auto f = build_frame<4>(s.x, s.normalization, s.orientation, p);
      const FrameResiduals r = frame_residuals(f);
      EXPECT_LT(max_residual(r), 1e-9) << s.name << " weingarten=" << r.weingarten << " tangency=" << r.tangency;
    }
}

TEST(FrameLaws, BFormHasSecondDerivativeExpression) {
  const SurfaceSpec s = ellipsoid();
  const auto f = build_frame<4>(s.x, s.normalization, s.orientation, kSamplePoints[1]);
  const FrameResiduals r = frame_residuals(f);
  ASSERT_TRUE(r.b_second_form.has_value());
  EXPECT_LT(*r.b_second_form, 1e-10);
}

TEST(FrameLaws, IndexRaisingMatchesLeastSquares) {
  const SurfaceSpec s = ellipsoid("mode = \"custom\"\nq = \"1 + 0.1*sin(u1)\"");
  const auto f = build_frame<4>(s.x, s.normalization, s.orientation, kSamplePoints[2]);
  EXPECT_LT(max_abs_diff(f.Bmix, f.Bmix_raised), 1e-10);
  // B is symmetric while Bmix in general is not.
  EXPECT_LT(std::abs(f.B[0][1] - f.B[1][0]), 1e-12);
}

TEST(Beltrami, PositionBasisFormIsNotTangent) {
  // y' = q xi + III^{ij} d_i q d_j x: d_i y' leaves the tangent space
  // for non-constant q, which rules this form out.
  const SurfaceSpec s = ellipsoid("mode = \"custom\"\nq = \"1 + 0.1*sin(u1)\"");
  const ChartPoint p = kSamplePoints[1];
  const auto x = eval_vec_jet<4>(s.x, p);
  const auto xi = unit_normal(x, s.orientation);
  const auto ff = fundamental_forms(x, xi);
  const auto q = support_function(s.normalization, ff.Ktilde, p);
  const auto III_inv = inverse(ff.III);
  VecJet<4> y = scaled(xi, q);
  for (int j = 0; j < 3; ++j) {
    Jet<4> coeff = III_inv[0][j] * q.d(0) + III_inv[1][j] * q.d(1) + III_inv[2][j] * q.d(2);
    y = y + scaled(derivative(x, j), coeff);
  }
  double tangency = 0.0;
  for (int i = 0; i < 3; ++i) tangency = std::fmax(tangency, std::abs(dot(values(derivative(y, i)), values(xi))));
  EXPECT_GT(tangency, 1e-3);

  const auto f = build_frame<4>(s.x, s.normalization, s.orientation, p);
  EXPECT_LT(frame_residuals(f).tangency, 1e-12);
}

TEST(Guards, DegenerateInputs) {
  const NormalizationMode euclid = NormalizationMode::euclidean();
  const std::array<Expression, 4> flat{parse("u1"), parse("u2"), parse("u3"), parse("0")};
  EXPECT_THROW((void)build_frame<4>(flat, euclid, 1, {0.5, 0.5, 0.5}), VanishingGaussCurvature);
  const std::array<Expression, 4> folded{parse("u1 + u2"), parse("u1 + u2"), parse("u3"), parse("u3^2")};
  EXPECT_THROW((void)build_frame<4>(folded, euclid, 1, {0.5, 0.5, 0.5}), DegenerateImmersion);
  const SurfaceSpec s = sphere(1.0);
  EXPECT_THROW((void)build_frame<4>(s.x, NormalizationMode::custom("0"), 1, {0.5, 0.1, 0.1}), ZeroSupport);
  EXPECT_THROW((void)build_frame<4>(s.x, NormalizationMode::custom("u1 - 0.5"), 1, {0.5, 0.1, 0.1}), ZeroSupport);
}

TEST(Curvature, DiagonalOperator) {
  const CurvatureSet c = curvature_functions({{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}});
  EXPECT_NEAR(c.H, 2.0, 1e-15);
  EXPECT_NEAR(c.H2, 11.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.K, 6.0, 1e-15);
  EXPECT_NEAR(c.kappas[0], 3.0, 1e-14);
  EXPECT_NEAR(c.kappas[1], 2.0, 1e-14);
  EXPECT_NEAR(c.kappas[2], 1.0, 1e-14);
  EXPECT_NEAR(*c.radii[2], 1.0, 1e-14);
}

TEST(Curvature, ComplexPairIsReported) {
  // Rotation block: eigenvalues 1 +- 2i and 3.
  const CurvatureSet c = curvature_functions({{{1, -2, 0}, {2, 1, 0}, {0, 0, 3}}});
  EXPECT_FALSE(c.real_eigenvalues);
  EXPECT_NEAR(c.kappas[0], 3.0, 1e-13);
  EXPECT_NEAR(c.kappas[1], 1.0, 1e-13);
  EXPECT_NEAR(c.K, 15.0, 1e-13);
  EXPECT_FALSE(c.radii[0].has_value());
}

TEST(Curvature, ClusteredRootsStayAccurate) {
  Mat3<double> b = scaled_identity(0.5);
  b[0][1] = 1e-15;
  b[2][2] += 2e-16;
  const CurvatureSet c = curvature_functions(b);
  EXPECT_TRUE(c.real_eigenvalues);
  for (double k : c.kappas) EXPECT_NEAR(k, 0.5, 1e-12);
}
