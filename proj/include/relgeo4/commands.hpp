#pragma once

// Command implementations behind the CLI. Each returns a report document
// and an exit code (0 success, 1 verification failure). Input problems
// surface as exceptions, which the CLI maps to exit code 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "relgeo4/bonnet.hpp"
#include "relgeo4/errors.hpp"
#include "relgeo4/parallel.hpp"
#include "relgeo4/relative_frame.hpp"
#include "relgeo4/report.hpp"
#include "relgeo4/surface.hpp"

namespace relgeo4 {

struct CommandOutput {
  Json report;
  int exit_code = 0;
};

/// Jet order of the recomputed parallel frame; equiaffine y needs two
/// orders more than the base pipeline.
inline constexpr int kRecomputeJetOrder = 6;

namespace detail {

inline Json report_header(const std::string& command, const SurfaceSpec* spec) {
  Json r;
  r["schema"] = kReportSchema;
  r["command"] = command;
  r["surface"] = spec ? surface_json(*spec) : Json(nullptr);
  r["grid"] = spec ? grid_json(spec->grid) : Json(nullptr);
  r["points"] = Json::array();
  r["summary"] = Json::object();
  r["candidates"] = Json::array();
  return r;
}

inline void merge_max(FrameResiduals& acc, const FrameResiduals& r) {
  acc.weingarten = std::fmax(acc.weingarten, r.weingarten);
  acc.conormal_tangent = std::fmax(acc.conormal_tangent, r.conormal_tangent);
  acc.conormal_unit = std::fmax(acc.conormal_unit, r.conormal_unit);
  acc.conormal_xi = std::fmax(acc.conormal_xi, r.conormal_xi);
  acc.b_symmetry = std::fmax(acc.b_symmetry, r.b_symmetry);
  acc.tangency = std::fmax(acc.tangency, r.tangency);
  acc.index_raise = std::fmax(acc.index_raise, r.index_raise);
  acc.g_relation = std::fmax(acc.g_relation, r.g_relation);
  if (r.b_second_form) acc.b_second_form = std::fmax(acc.b_second_form.value_or(0.0), *r.b_second_form);
}

/// |a - b| / max(1, |a|, |b|)
inline double scaled_diff(double a, double b) {
  return std::abs(a - b) / std::fmax(1.0, std::fmax(std::abs(a), std::abs(b)));
}

inline double curvature_discrepancy(const CurvatureSet& a, const CurvatureSet& b) {
  double d = std::fmax(scaled_diff(a.H, b.H), std::fmax(scaled_diff(a.H2, b.H2), scaled_diff(a.K, b.K)));
  if (a.real_eigenvalues && b.real_eigenvalues)
    for (int i = 0; i < 3; ++i) d = std::fmax(d, scaled_diff(a.kappas[i], b.kappas[i]));
  return d;
}

inline double matrix_discrepancy(const Mat3<double>& a, const Mat3<double>& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d = std::fmax(d, scaled_diff(a[i][j], b[i][j]));
  return d;
}

template <int O>
std::vector<RelativeFrame<O>> frames_on_grid(const SurfaceSpec& spec) {
  std::vector<RelativeFrame<O>> out;
  for (const auto& p : grid_points(spec)) out.push_back(build_frame<O>(spec.x, spec.normalization, spec.orientation, p));
  return out;
}

inline std::vector<CurvatureSet> curvatures_on_grid(const SurfaceSpec& spec) {
  std::vector<CurvatureSet> out;
  for (const auto& p : grid_points(spec))
    out.push_back(build_frame<kDefaultJetOrder>(spec.x, spec.normalization, spec.orientation, p).curvature);
  return out;
}

/// Rethrow an error raised at grid point p with the point in the message.
template <class F>
auto at_point(const ChartPoint& p, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const OffsetSingular& e) {
    throw OffsetSingular(std::string(e.what()) + " at grid point " + format_point(p));
  } catch (const StarPrincipalUndefined& e) {
    throw StarPrincipalUndefined(std::string(e.what()) + " at grid point " + format_point(p));
  }
}

/// Positive definiteness by leading principal minors.
inline int definiteness(const Mat3<double>& m) {
  const double m1 = m[0][0];
  const double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double m3 = det(m);
  if (m1 > 0 && m2 > 0 && m3 > 0) return +1;
  if (m1 < 0 && m2 > 0 && m3 < 0) return -1;
  return 0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// analyze

inline CommandOutput cmd_analyze(const SurfaceSpec& spec, double tol = 1e-6) {
  CommandOutput out;
  Json& r = out.report;
  r = detail::report_header("analyze", &spec);
  std::vector<double> hs, h2s, ks;
  FrameResiduals worst;
  for (const auto& p : grid_points(spec)) {
    const auto f = build_frame<kDefaultJetOrder>(spec.x, spec.normalization, spec.orientation, p);
    const FrameResiduals res = frame_residuals(f);
    detail::merge_max(worst, res);
    hs.push_back(f.curvature.H);
    h2s.push_back(f.curvature.H2);
    ks.push_back(f.curvature.K);
    Json pt;
    pt["u"] = point_json(p);
    pt["q"] = f.q;
    pt["Ktilde"] = f.Ktilde;
    pt.update(curvature_json(f.curvature));
    pt["residuals"] = residuals_json(res);
    r["points"].push_back(std::move(pt));
  }
  Json& s = r["summary"];
  s["H"] = constancy_json(measure_constancy("H", hs, tol));
  s["H2"] = constancy_json(measure_constancy("H2", h2s, tol));
  s["K"] = constancy_json(measure_constancy("K", ks, tol));
  s["max_residuals"] = residuals_json(worst);
  s["max_residual"] = max_residual(worst);
  return out;
}

// ---------------------------------------------------------------------------
// parallel

inline CommandOutput cmd_parallel(const SurfaceSpec& spec, double mu) {
  if (mu == 0.0) throw PreconditionViolated("mu must be a nonzero constant");
  CommandOutput out;
  Json& r = out.report;
  r = detail::report_header("parallel", &spec);
  double max_disc = 0.0, max_b = 0.0, max_peterson = 0.0, max_shared = 0.0, max_j = 0.0, max_mu = 0.0;
  double min_abs_a = std::numeric_limits<double>::infinity();
  std::vector<double> ks, h2s, hs;
  for (const auto& p : grid_points(spec)) {
    const auto base = build_frame<kRecomputeJetOrder>(spec.x, spec.normalization, spec.orientation, p);
    const CurvatureSet& c = base.curvature;
    const double A = detail::at_point(p, [&] { return a_of_mu(c, mu); });
    const CurvatureSet star = detail::at_point(p, [&] { return star_curvatures(c, mu); });
    const auto rec = parallel_frame(base, mu);
    const Mat3<double> b_star = star_shape_operator(base.Bmix, mu);

    const double disc = detail::curvature_discrepancy(star, rec.curvature);
    const double b_disc = std::fmax(detail::matrix_discrepancy(b_star, star_shape_operator_solve(base.Bmix, mu)),
                                    detail::matrix_discrepancy(b_star, rec.Bmix));
    const double peterson = peterson_check(base.x, base.y, mu);
    const SharedQuantities shared = shared_quantities_check(base, rec);
    max_disc = std::fmax(max_disc, disc);
    max_b = std::fmax(max_b, b_disc);
    max_peterson = std::fmax(max_peterson, peterson);
    max_shared = std::fmax(max_shared, shared.max());
    min_abs_a = std::fmin(min_abs_a, std::abs(A));
    ks.push_back(star.K);
    h2s.push_back(star.H2);
    hs.push_back(star.H);

    Json pt;
    pt["u"] = point_json(p);
    pt["A"] = A;
    pt["base"] = curvature_json(c);
    pt["star"] = curvature_json(star);
    pt["recomputed"] = curvature_json(rec.curvature);
    pt["discrepancy"] = disc;
    pt["b_star_discrepancy"] = b_disc;
    pt["peterson"] = peterson;
    pt["shared"] = Json{{"support", shared.support},
                        {"conormal", shared.conormal},
                        {"b_form", shared.b_form},
                        {"relative_image", shared.relative_image}};
    if (std::abs(c.K) >= kZeroCurvature && std::abs(star.K) >= kZeroCurvature) {
      const double J = invariant_J(c), Js = invariant_J(star);
      const double mu_back = mu_from_ratio(c, star);
      max_j = std::fmax(max_j, std::abs(Js - J));
      max_mu = std::fmax(max_mu, std::abs(mu_back - mu));
      pt["J"] = J;
      pt["J_star"] = Js;
      pt["mu_recovered"] = mu_back;
    } else {
      pt["J"] = nullptr;
      pt["J_star"] = nullptr;
      pt["mu_recovered"] = nullptr;
    }
    r["points"].push_back(std::move(pt));
  }
  Json& s = r["summary"];
  s["mu"] = mu;
  s["min_abs_A"] = min_abs_a;
  s["K_star"] = constancy_json(measure_constancy("K*", ks, 1e-6));
  s["H2_star"] = constancy_json(measure_constancy("H2*", h2s, 1e-6));
  s["H_star"] = constancy_json(measure_constancy("H*", hs, 1e-6));
  s["max_path_discrepancy"] = max_disc;
  s["max_b_star_discrepancy"] = max_b;
  s["max_peterson"] = max_peterson;
  s["max_shared_deviation"] = max_shared;
  s["max_J_drift"] = max_j;
  s["max_mu_recovery_error"] = max_mu;
  return out;
}

// ---------------------------------------------------------------------------
// bonnet

inline Json verification_json(const CandidateVerification& v) {
  Json j;
  j["label"] = v.label;
  j["proposition"] = to_string(v.proposition);
  j["status"] = v.status;
  if (v.candidate) j.update(candidate_json(*v.candidate));
  if (!v.message.empty()) j["message"] = v.message;
  if (v.candidate && v.status != "OffsetSingular" && v.measured) {
    j["min_abs_A"] = v.min_abs_A;
    j["measured"] = constancy_json(*v.measured);
    j["prediction_error"] = v.prediction_error;
  } else if (v.candidate) {
    j["min_abs_A"] = v.min_abs_A;
  }
  return j;
}

inline CommandOutput cmd_bonnet(const SurfaceSpec& spec, double tol = 1e-6) {
  CommandOutput out;
  Json& r = out.report;
  r = detail::report_header("bonnet", &spec);
  const auto pts = grid_points(spec);
  const std::vector<CurvatureSet> samples = detail::curvatures_on_grid(spec);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Json pt;
    pt["u"] = point_json(pts[i]);
    pt["H"] = samples[i].H;
    pt["H2"] = samples[i].H2;
    pt["K"] = samples[i].K;
    r["points"].push_back(std::move(pt));
  }
  BonnetTolerances bt;
  bt.constancy = tol;
  const BonnetReport br = verify_bonnet(samples, bt);
  Json& s = r["summary"];
  s["H"] = constancy_json(br.H);
  s["H2"] = constancy_json(br.H2);
  s["K"] = constancy_json(br.K);
  s["outcome"] = br.nothing_applicable ? "NothingApplicable" : "applicable";
  std::size_t verified = 0;
  for (const auto& v : br.candidates) {
    if (v.status == "verified") ++verified;
    r["candidates"].push_back(verification_json(v));
  }
  s["candidates"] = br.candidates.size();
  s["verified"] = verified;
  return out;
}

// ---------------------------------------------------------------------------
// roots

struct RootInputs {
  std::optional<double> H, H2, K;
};

inline CommandOutput cmd_roots(const RootInputs& in) {
  CommandOutput out;
  Json& r = out.report;
  r = detail::report_header("roots", nullptr);
  r["inputs"] = Json{{"H", optional_json(in.H)}, {"H2", optional_json(in.H2)}, {"K", optional_json(in.K)}};
  std::size_t ok = 0, failed = 0;

  auto add = [&](const BonnetCandidate& c) {
    Json j;
    j["label"] = c.label;
    j["proposition"] = to_string(c.proposition);
    j["status"] = "ok";
    j.update(candidate_json(c));
    if (in.H && in.H2 && in.K) {
      CurvatureSet cs;
      cs.H = *in.H;
      cs.H2 = *in.H2;
      cs.K = *in.K;
      j["A"] = a_polynomial(cs, c.mu);
    }
    r["candidates"].push_back(std::move(j));
    ++ok;
  };
  auto fail = [&](const std::string& label, Proposition prop, const std::string& kind, const std::string& msg) {
    r["candidates"].push_back(
        Json{{"label", label}, {"proposition", to_string(prop)}, {"status", kind}, {"message", msg}});
    ++failed;
  };
  auto attempt = [&](const std::string& label, Proposition prop, bool have, const char* needs, auto&& make) {
    if (!have) {
      fail(label, prop, "PreconditionViolated", std::string("requires ") + needs);
      return;
    }
    try {
      add(make());
    } catch (const Error& e) {
      fail(label, prop, e.kind(), e.what());
    }
  };

  attempt("mu1", Proposition::P6_1, in.H2 && in.K, "--H2 and --K", [&] { return mu1(*in.H2, *in.K); });
  attempt("mu2", Proposition::P6_3a, in.H && in.K, "--H and --K", [&] { return mu2(*in.H, *in.K); });
  attempt("mu3", Proposition::P6_3b, in.H && in.K, "--H and --K", [&] { return mu3(*in.H, *in.K); });
  if (in.H && in.K)
    if (auto extra = mu3_double_root(*in.H, *in.K)) add(*extra);
  if (in.H && in.H2) {
    for (const auto& o : mu_4_to_9(*in.H, *in.H2)) {
      if (o.candidate) add(*o.candidate);
      else fail(o.label, o.proposition, o.error, o.message);
    }
  } else {
    for (int i = 4; i <= 9; ++i) {
      const Proposition prop = i <= 5 ? Proposition::P6_5a : i <= 7 ? Proposition::P6_5b : Proposition::P6_5c;
      fail("mu" + std::to_string(i), prop, "PreconditionViolated", "requires --H and --H2");
    }
  }
  if (in.H && in.H2 && in.K) {
    const double H = *in.H, H2 = *in.H2, K = *in.K;
    try {
      const auto mus = minimal_parallel_mus(H, H2, K);
      for (std::size_t i = 0; i < mus.size(); ++i) {
        BonnetCandidate c;
        c.proposition = Proposition::Minimal_5b;
        c.label = "minimal_" + std::to_string(i + 1);
        c.mu = mus[i];
        c.predicted_field = CurvatureField::H;
        c.predicted_value = 0.0;
        c.certificate = backward_error({mus[i] * mus[i] * K, -2.0 * mus[i] * H2, H});
        add(c);
      }
    } catch (const Error& e) {
      fail("minimal", Proposition::Minimal_5b, e.kind(), e.what());
    }
    attempt("h2_zero", Proposition::H2Zero_Prop5_1, true, "", [&] {
      BonnetCandidate c;
      c.proposition = Proposition::H2Zero_Prop5_1;
      c.label = "h2_zero";
      c.mu = h2_vanishing_mu(H2, K);
      c.predicted_field = CurvatureField::H2;
      c.predicted_value = 0.0;
      c.certificate = backward_error({H2, -c.mu * K});
      return c;
    });
  } else {
    fail("minimal", Proposition::Minimal_5b, "PreconditionViolated", "requires --H, --H2 and --K");
    fail("h2_zero", Proposition::H2Zero_Prop5_1, "PreconditionViolated", "requires --H2 and --K");
  }
  r["summary"] = Json{{"candidates", ok}, {"not_applicable", failed}};
  return out;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  double tolerance = 0.0;
  double worst = 0.0;
  std::size_t samples = 0;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

class CheckList {
 public:
  void record(const std::string& name, double value, double tolerance) {
    Check& c = get(name, tolerance);
    ++c.samples;
    if (std::isnan(value) || std::isnan(c.worst)) c.worst = std::numeric_limits<double>::quiet_NaN();
    else c.worst = std::fmax(c.worst, value);
    if (!(value <= tolerance)) ++c.failures;
  }
  /// Registers a check that may end up with no samples.
  Check& get(const std::string& name, double tolerance) {
    for (auto& c : checks_)
      if (c.name == name) return c;
    checks_.push_back({name, tolerance});
    return checks_.back();
  }
  const std::vector<Check>& checks() const { return checks_; }
  bool all_passed() const {
    for (const auto& c : checks_)
      if (!c.passed()) return false;
    return true;
  }

 private:
  std::vector<Check> checks_;
};

/// Deterministic offsets in [-0.2, 0.2] with |A(mu)| > 1e-3 at every sample.
inline std::vector<double> sample_offsets(std::span<const CurvatureSet> samples, std::size_t count = 20,
                                          std::uint64_t seed = 0x5eed0f1u) {
  std::mt19937_64 gen(seed);
  std::vector<double> mus;
  for (int attempt = 0; attempt < 10000 && mus.size() < count; ++attempt) {
    const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const double mu = -0.2 + 0.4 * unit;
    if (mu == 0.0) continue;
    bool clear = true;
    for (const auto& c : samples) clear = clear && std::abs(a_polynomial(c, mu)) > 1e-3;
    if (clear) mus.push_back(mu);
  }
  return mus;
}

struct VerifyTolerances {
  double frame = 1e-7;
  double normalization = 1e-10;
  double curvature = 1e-7;
  double identity = 1e-8;
  double star_operator = 1e-9;
  double closing = 1e-6;
  double invariance = 1e-6;
  double recompute = 1e-6;
};

inline CheckList verify_checks(const SurfaceSpec& spec, std::vector<double>* mus_out = nullptr,
                               std::size_t recompute_offsets = 3, const VerifyTolerances& tol = {}) {
  CheckList checks;
  const auto pts = grid_points(spec);
  const auto frames = detail::frames_on_grid<kDefaultJetOrder>(spec);
  std::vector<CurvatureSet> curv;
  for (const auto& f : frames) curv.push_back(f.curvature);

  // Frame laws and normalization.
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& f = frames[k];
    const FrameResiduals res = frame_residuals(f);
    checks.record("frame.weingarten", res.weingarten, tol.frame);
    checks.record("frame.conormal_tangent", res.conormal_tangent, tol.frame);
    checks.record("frame.conormal_unit", res.conormal_unit, tol.frame);
    checks.record("frame.conormal_xi", res.conormal_xi, tol.frame);
    checks.record("frame.b_symmetry", res.b_symmetry, tol.frame);
    checks.record("frame.tangency", res.tangency, tol.frame);
    checks.record("frame.index_raise", res.index_raise, tol.frame);
    checks.record("frame.g_relation", res.g_relation, tol.frame);
    if (res.b_second_form) checks.record("frame.b_second_form", *res.b_second_form, tol.frame);

    // Sign convention of the shape operator: G = h/q positive definite
    // wherever h is definite.
    if (detail::definiteness(f.h) != 0)
      checks.record("frame.weingarten_sign", detail::definiteness(f.G) == 1 ? 0.0 : 1.0, 0.0);

    switch (spec.normalization.kind) {
      case NormalizationKind::Euclidean:
        checks.record("normalization.euclidean_q", std::abs(f.q - 1.0), tol.normalization);
        checks.record("normalization.euclidean_y_is_xi", norm(values(f.y) - values(f.xi)), tol.normalization);
        checks.record("normalization.euclidean_G_is_h", max_abs_diff(f.G, f.h), tol.normalization);
        break;
      case NormalizationKind::Equiaffine:
        checks.record("normalization.equiaffine_q",
                      detail::scaled_diff(f.q, std::pow(std::abs(f.Ktilde), 0.2)), tol.normalization);
        break;
      case NormalizationKind::Custom:
        checks.record("normalization.custom_q",
                      detail::scaled_diff(f.q, evaluate(spec.normalization.q, pts[k])), tol.normalization);
        break;
    }

    const CurvatureSet& c = f.curvature;
    if (c.real_eigenvalues) {
      const auto& k3 = c.kappas;
      checks.record("curvature.mean", detail::scaled_diff(c.H, (k3[0] + k3[1] + k3[2]) / 3.0), tol.curvature);
      checks.record("curvature.second_mean",
                    detail::scaled_diff(c.H2, (k3[0] * k3[1] + k3[1] * k3[2] + k3[2] * k3[0]) / 3.0), tol.curvature);
      checks.record("curvature.gauss", detail::scaled_diff(c.K, k3[0] * k3[1] * k3[2]), tol.curvature);
      if (c.radii[0] && c.radii[1] && c.radii[2] && std::abs(c.K) >= kZeroCurvature)
        checks.record("curvature.radii_sum", detail::scaled_diff(*c.radii[0] + *c.radii[1] + *c.radii[2], 3.0 * c.H2 / c.K),
                      tol.curvature);
    }
  }

  // Offsets: closed-form identities at every point.
  const std::vector<double> mus = sample_offsets(curv);
  if (mus_out) *mus_out = mus;
  checks.get("offset.sampled", 0.0);
  checks.record("offset.sampled", mus.empty() ? 1.0 : 0.0, 0.0);
  for (std::size_t m = 0; m < mus.size(); ++m) {
    const double mu = mus[m];
    for (std::size_t k = 0; k < frames.size(); ++k) {
      const auto& f = frames[k];
      const CurvatureSet& c = f.curvature;
      const CurvatureSet s = star_curvatures(c, mu);
      if (auto af = a_factored(c, mu))
        checks.record("offset.a_factored", detail::scaled_diff(*af, a_polynomial(c, mu)), tol.identity);
      for (const auto& id : pointwise_identities(c, mu)) checks.record("identity." + id.name, id.residual(), tol.identity);
      const Mat3<double> bs = star_shape_operator(f.Bmix, mu);
      checks.record("offset.star_operator_solve", detail::matrix_discrepancy(bs, star_shape_operator_solve(f.Bmix, mu)),
                    tol.star_operator);
      checks.record("offset.star_operator_curvatures", detail::curvature_discrepancy(curvature_functions(bs), s),
                    tol.identity);
      checks.record("offset.peterson", peterson_check(f.x, f.y, mu), tol.identity);
      const double mu2 = -0.5 * mu;
      try {
        checks.record("offset.semigroup", semigroup_residual(c, mu, mu2), tol.identity);
      } catch (const GeometryError&) {
      }
      if (std::abs(c.K) >= kZeroCurvature && std::abs(s.K) >= kZeroCurvature) {
        checks.record("offset.J_invariance", std::abs(invariant_J(s) - invariant_J(c)), tol.invariance);
        checks.record("offset.mu_recovery", std::abs(mu_from_ratio(c, s) - mu), tol.identity);
        checks.record("identity.closing", closing_identity(c, s).residual(), tol.closing);
      }
      if (std::abs(c.H2) < kZeroCurvature && std::abs(s.K) >= kZeroCurvature)
        checks.record("offset.h2_zero_ratio", std::abs(s.H2 / s.K + mu), tol.identity);
    }
  }

  // Offsets: recompute the frame of x_mu for the first few offsets.
  const std::size_t n_rec = std::min(recompute_offsets, mus.size());
  if (n_rec > 0) {
    for (const auto& p : pts) {
      const auto base = build_frame<kRecomputeJetOrder>(spec.x, spec.normalization, spec.orientation, p);
      for (std::size_t m = 0; m < n_rec; ++m) {
        const double mu = mus[m];
        const auto rec = parallel_frame(base, mu);
        const CurvatureSet s = star_curvatures(base.curvature, mu);
        checks.record("recompute.curvatures", detail::curvature_discrepancy(s, rec.curvature), tol.recompute);
        checks.record("recompute.star_operator", detail::matrix_discrepancy(star_shape_operator(base.Bmix, mu), rec.Bmix),
                      tol.recompute);
        const SharedQuantities sh = shared_quantities_check(base, rec);
        checks.record("recompute.shared_support", sh.support, tol.recompute);
        checks.record("recompute.shared_conormal", sh.conormal, tol.recompute);
        checks.record("recompute.shared_b_form", sh.b_form, tol.recompute);
        checks.record("recompute.weingarten", frame_residuals(rec).weingarten, tol.recompute);
      }
    }
  }
  return checks;
}

inline CommandOutput cmd_verify(const SurfaceSpec& spec) {
  CommandOutput out;
  Json& r = out.report;
  r = detail::report_header("verify", &spec);
  std::vector<double> mus;
  const CheckList checks = verify_checks(spec, &mus);
  Json rows = Json::array();
  std::size_t passed = 0;
  for (const auto& c : checks.checks()) {
    if (c.passed()) ++passed;
    rows.push_back(Json{{"name", c.name},
                        {"samples", c.samples},
                        {"worst", c.worst},
                        {"tolerance", c.tolerance},
                        {"failures", c.failures},
                        {"passed", c.passed()}});
  }
  r["checks"] = rows;
  Json& s = r["summary"];
  s["offsets"] = mus;
  s["checks"] = checks.checks().size();
  s["passed"] = passed;
  s["failed"] = checks.checks().size() - passed;
  s["verdict"] = checks.all_passed() ? "pass" : "fail";
  out.exit_code = checks.all_passed() ? 0 : 1;
  return out;
}

}  // namespace relgeo4
