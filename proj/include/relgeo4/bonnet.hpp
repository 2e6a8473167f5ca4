#pragma once

/**
 * @file bonnet.hpp
 * @brief Relative distances at which a relatively parallel hypersurface has
 *        a constant curvature function, and their numerical verification.
 *
 * Each closed-form distance is the real root of a polynomial P(mu) that
 * satisfies A(mu) * (affine expression in a starred curvature) = P(mu), so
 * the starred function takes a fixed value wherever A(mu) != 0:
 *
 *   mu1    2 mu^3 K - 3 mu^2 H2 + 1     H*  = -1 / (3 mu)      (K, H2 const)
 *   mu2    2 mu^3 K - 3 mu H + 1        H2* = 1 / (3 mu^2)     (K, H const)
 *   mu3    mu^3 K - 3 mu H + 2          H*  = -2 / (3 mu)      (K, H const)
 *   mu4,5  3 mu^2 H2 - 3 mu H + 1       K*  = -1 / mu^3        (H2, H const)
 *   mu6,7  2 mu^2 H2 - 3 mu H + 1       H2* = 1 / mu^2         (H2, H const)
 *   mu8,9  mu^2 H2 - 2 mu H + 1         H*  = -1 / mu          (H2, H const)
 *
 * plus the distances giving H* = 0 (roots of mu^2 K - 2 mu H2 + H) and
 * H2* = 0 (mu = H2 / K).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relgeo4/errors.hpp"
#include "relgeo4/parallel.hpp"
#include "relgeo4/relative_frame.hpp"

namespace relgeo4 {

enum class Proposition { P6_1, P6_3a, P6_3b, P6_5a, P6_5b, P6_5c, Minimal_5b, H2Zero_Prop5_1 };
enum class CurvatureField { H, H2, K };

inline std::string to_string(Proposition p) {
  switch (p) {
    case Proposition::P6_1: return "P6_1";
    case Proposition::P6_3a: return "P6_3a";
    case Proposition::P6_3b: return "P6_3b";
    case Proposition::P6_5a: return "P6_5a";
    case Proposition::P6_5b: return "P6_5b";
    case Proposition::P6_5c: return "P6_5c";
    case Proposition::Minimal_5b: return "Minimal_5b";
    case Proposition::H2Zero_Prop5_1: return "H2Zero_Prop5_1";
  }
  return "?";
}

inline std::string to_string(CurvatureField f) {
  switch (f) {
    case CurvatureField::H: return "H";
    case CurvatureField::H2: return "H2";
    case CurvatureField::K: return "K";
  }
  return "?";
}

inline double field_of(const CurvatureSet& c, CurvatureField f) {
  switch (f) {
    case CurvatureField::H: return c.H;
    case CurvatureField::H2: return c.H2;
    case CurvatureField::K: return c.K;
  }
  return 0.0;
}

struct BonnetCandidate {
  Proposition proposition = Proposition::P6_1;
  std::string label;  // "mu1", "mu4", ...
  double mu = 0.0;
  CurvatureField predicted_field = CurvatureField::H;
  double predicted_value = 0.0;
  std::optional<double> W;
  /// Backward error |P(mu)| / sum|terms of P|.
  double certificate = 0.0;
};

/// Relative slack for the closed inequalities in the preconditions, so that
/// boundary cases such as K^2 = H2^3 survive rounding in their inputs.
inline constexpr double kInequalitySlack = 1e-9;
inline constexpr double kNonZero = 1e-12;

inline bool at_least(double lhs, double rhs) {
  const double scale = std::fmax(std::abs(lhs), std::abs(rhs));
  return lhs - rhs >= -kInequalitySlack * scale;
}

inline double backward_error(std::initializer_list<double> terms) {
  double sum = 0.0, mag = 0.0;
  for (double t : terms) {
    sum += t;
    mag += std::abs(t);
  }
  return mag > 0.0 ? std::abs(sum) / mag : 0.0;
}

// Defining polynomials, as lists of terms for the backward error.
inline double certificate_mu1(double mu, double H2, double K) {
  return backward_error({2.0 * mu * mu * mu * K, -3.0 * mu * mu * H2, 1.0});
}
inline double certificate_mu2(double mu, double H, double K) {
  return backward_error({2.0 * mu * mu * mu * K, -3.0 * mu * H, 1.0});
}
inline double certificate_mu3(double mu, double H, double K) {
  return backward_error({mu * mu * mu * K, -3.0 * mu * H, 2.0});
}
inline double certificate_p1(double mu, double H, double H2) {
  return backward_error({3.0 * mu * mu * H2, -3.0 * mu * H, 1.0});
}
inline double certificate_p2(double mu, double H, double H2) {
  return backward_error({2.0 * mu * mu * H2, -3.0 * mu * H, 1.0});
}
inline double certificate_p3(double mu, double H, double H2) {
  return backward_error({mu * mu * H2, -2.0 * mu * H, 1.0});
}

/// Distance to the parallel hypersurface of constant H* when K and H2 are
/// constant with K != 0 and K^2 >= H2^3.
inline BonnetCandidate mu1(double H2, double K) {
  if (std::abs(K) < kNonZero) throw PreconditionViolated("mu1 needs K != 0");
  if (!at_least(K * K, H2 * H2 * H2)) throw PreconditionViolated("mu1 needs K^2 >= H2^3");
  const double W = std::cbrt(2.0 * K * K - H2 * H2 * H2 + 2.0 * std::abs(K) * std::sqrt(std::fmax(0.0, K * K - H2 * H2 * H2)));
  if (std::abs(W) < kNonZero) throw DegenerateW("mu1: W vanishes");
  BonnetCandidate c;
  c.proposition = Proposition::P6_1;
  c.label = "mu1";
  c.W = W;
  c.mu = -(W + H2 * (H2 / W - 1.0)) / (2.0 * K);
  c.predicted_field = CurvatureField::H;
  c.predicted_value = -1.0 / (3.0 * c.mu);
  c.certificate = certificate_mu1(c.mu, H2, K);
  return c;
}

/// Distance to the parallel hypersurface of constant H2* when K and H are
/// constant with K != 0 and K (K - 2 H^3) >= 0.
inline BonnetCandidate mu2(double H, double K) {
  if (std::abs(K) < kNonZero) throw PreconditionViolated("mu2 needs K != 0");
  const double gate = K * (K - 2.0 * H * H * H);
  if (!at_least(K * K, 2.0 * K * H * H * H)) throw PreconditionViolated("mu2 needs K (K - 2 H^3) >= 0");
  // K^3 (K - 2H^3) = K^2 * gate, so the radicand's sign is the gate's.
  const double W = std::cbrt(K * K + std::sqrt(K * K * std::fmax(0.0, gate)));
  if (std::abs(W) < kNonZero) throw DegenerateW("mu2: W vanishes");
  BonnetCandidate c;
  c.proposition = Proposition::P6_3a;
  c.label = "mu2";
  c.W = W;
  c.mu = -H / (std::cbrt(2.0) * W) - W / (std::cbrt(4.0) * K);
  c.predicted_field = CurvatureField::H2;
  c.predicted_value = 1.0 / (3.0 * c.mu * c.mu);
  c.certificate = certificate_mu2(c.mu, H, K);
  return c;
}

/// Distance to the parallel hypersurface of constant H* when K and H are
/// constant with K != 0 and K (K - H^3) >= 0.
inline BonnetCandidate mu3(double H, double K) {
  if (std::abs(K) < kNonZero) throw PreconditionViolated("mu3 needs K != 0");
  const double gate = K * (K - H * H * H);
  if (!at_least(K * K, K * H * H * H)) throw PreconditionViolated("mu3 needs K (K - H^3) >= 0");
  const double W = std::cbrt(K * K + std::sqrt(K * K * std::fmax(0.0, gate)));
  if (std::abs(W) < kNonZero) throw DegenerateW("mu3: W vanishes");
  BonnetCandidate c;
  c.proposition = Proposition::P6_3b;
  c.label = "mu3";
  c.W = W;
  c.mu = -H / W - W / K;
  c.predicted_field = CurvatureField::H;
  c.predicted_value = -2.0 / (3.0 * c.mu);
  c.certificate = certificate_mu3(c.mu, H, K);
  return c;
}

/// When K = H^3 the polynomial mu^3 K - 3 mu H + 2 also has the double root
/// mu = 1/H, with H* = -2H/3 wherever A(1/H) != 0.
inline std::optional<BonnetCandidate> mu3_double_root(double H, double K) {
  if (std::abs(H) < kNonZero || std::abs(K) < kNonZero) return std::nullopt;
  const double h3 = H * H * H;
  if (std::abs(K - h3) > kInequalitySlack * std::fmax(std::abs(K), std::abs(h3))) return std::nullopt;
  BonnetCandidate c;
  c.proposition = Proposition::P6_3b;
  c.label = "mu3'";
  c.mu = 1.0 / H;
  c.predicted_field = CurvatureField::H;
  c.predicted_value = -2.0 * H / 3.0;
  c.certificate = certificate_mu3(c.mu, H, K);
  return c;
}

/// Roots {[b + sqrt(disc)] / (2 a2), [b - sqrt(disc)] / (2 a2)} of
/// a2 mu^2 - b mu + c with disc = b^2 - 4 a2 c. The root formed by
/// cancellation is recovered from the product of the roots, c / a2. A
/// discriminant within rounding of zero is a double root.
inline constexpr double kDoubleRootSnap = 1e-14;

inline std::array<double, 2> quadratic_pair(double a2, double b, double c) {
  double disc = b * b - 4.0 * a2 * c;
  if (std::abs(disc) <= kDoubleRootSnap * std::fmax(b * b, std::abs(4.0 * a2 * c))) disc = 0.0;
  const double s = std::sqrt(std::fmax(0.0, disc));
  double plus = (b + s) / (2.0 * a2);
  double minus = (b - s) / (2.0 * a2);
  if (b >= 0.0) {
    if (plus != 0.0) minus = c / (a2 * plus);
  } else {
    if (minus != 0.0) plus = c / (a2 * minus);
  }
  return {plus, minus};
}

/// One entry of a root listing: either a candidate or the reason there is none.
struct RootOutcome {
  std::string label;
  Proposition proposition = Proposition::P6_1;
  std::optional<BonnetCandidate> candidate;
  std::string error;    // kind() of the failure, empty on success
  std::string message;
};

/// mu4..mu9 from constant H and H2 != 0. Each pair is gated by its own
/// inequality; a zero root is dropped with ZeroRoot.
inline std::vector<RootOutcome> mu_4_to_9(double H, double H2) {
  std::vector<RootOutcome> out;
  struct Pair {
    Proposition prop;
    int first;
    double a2, b;  // polynomial a2 mu^2 - b mu + 1
    bool ok;
    const char* gate;
    CurvatureField field;
  };
  // mu_i = [3H + (-1)^i sqrt(3) sqrt(3H^2 - 4H2)] / (6 H2), i = 4, 5  (roots of 3H2 mu^2 - 3H mu + 1)
  // mu_i = [3H + (-1)^i sqrt(9H^2 - 8H2)] / (4 H2),        i = 6, 7  (roots of 2H2 mu^2 - 3H mu + 1)
  // mu_i = [H + (-1)^i sqrt(H^2 - H2)] / H2,                i = 8, 9  (roots of H2 mu^2 - 2H mu + 1)
  const std::array<Pair, 3> pairs{{
      {Proposition::P6_5a, 4, 3.0 * H2, 3.0 * H, at_least(3.0 * H * H, 4.0 * H2), "3H^2 >= 4H2", CurvatureField::K},
      {Proposition::P6_5b, 6, 2.0 * H2, 3.0 * H, at_least(9.0 * H * H, 8.0 * H2), "9H^2 >= 8H2", CurvatureField::H2},
      {Proposition::P6_5c, 8, H2, 2.0 * H, at_least(H * H, H2), "H^2 >= H2", CurvatureField::H},
  }};
  for (const auto& p : pairs) {
    const std::string l0 = "mu" + std::to_string(p.first), l1 = "mu" + std::to_string(p.first + 1);
    auto fail = [&](const std::string& kind, const std::string& msg) {
      out.push_back({l0, p.prop, std::nullopt, kind, msg});
      out.push_back({l1, p.prop, std::nullopt, kind, msg});
    };
    if (std::abs(H2) < kNonZero) {
      fail("PreconditionViolated", "needs H2 != 0");
      continue;
    }
    if (!p.ok) {
      fail("PreconditionViolated", std::string("needs ") + p.gate);
      continue;
    }
    // (-1)^i: the even index takes the + sign.
    const std::array<double, 2> mus = quadratic_pair(p.a2, p.b, 1.0);
    for (int k = 0; k < 2; ++k) {
      const std::string& label = k == 0 ? l0 : l1;
      const double mu = mus[static_cast<std::size_t>(k)];
      if (std::abs(mu) < kNonZero || !std::isfinite(mu)) {
        out.push_back({label, p.prop, std::nullopt, "ZeroRoot", "root vanishes"});
        continue;
      }
      BonnetCandidate c;
      c.proposition = p.prop;
      c.label = label;
      c.mu = mu;
      c.predicted_field = p.field;
      switch (p.prop) {
        case Proposition::P6_5a:
          c.predicted_value = -1.0 / (mu * mu * mu);
          c.certificate = certificate_p1(mu, H, H2);
          break;
        case Proposition::P6_5b:
          c.predicted_value = 1.0 / (mu * mu);
          c.certificate = certificate_p2(mu, H, H2);
          break;
        default:
          c.predicted_value = -1.0 / mu;
          c.certificate = certificate_p3(mu, H, H2);
          break;
      }
      out.push_back({label, p.prop, c, {}, {}});
    }
  }
  return out;
}

/// Distances mu with H*(mu) = 0: roots of mu^2 K - 2 mu H2 + H, i.e.
/// [H2 -+ sqrt(H2^2 - K H)] / K. Zero roots are dropped.
inline std::vector<double> minimal_parallel_mus(double H, double H2, double K) {
  if (std::abs(K) < kNonZero) throw PreconditionViolated("needs K != 0");
  if (!at_least(H2 * H2, K * H)) throw NoRealRoot("H2^2 - K H < 0");
  // c_1 takes the minus sign, c_2 the plus sign.
  const auto [c2, c1] = quadratic_pair(K, 2.0 * H2, H);
  std::vector<double> out;
  for (double mu : {c1, c2})
    if (std::abs(mu) >= kNonZero && std::isfinite(mu)) out.push_back(mu);
  if (out.size() == 2 && std::abs(out[0] - out[1]) <= kInequalitySlack * std::abs(out[0])) out.pop_back();
  return out;
}

/// Distance to the unique parallel hypersurface with H2* = 0: mu = H2 / K.
inline double h2_vanishing_mu(double H2, double K) {
  if (std::abs(K) < kNonZero) throw ZeroRelativeCurvature("K vanishes");
  if (std::abs(H2) < kNonZero)
    throw PreconditionViolated("H2 = 0: no relatively parallel hypersurface has H2* = 0");
  return H2 / K;
}

// ---------------------------------------------------------------------------
// Verification over a sampled grid

struct ConstancyReport {
  std::string field;
  double mean = 0.0;
  double max_abs_deviation = 0.0;
  double relative_spread = 0.0;  // (max - min) / max(|mean|, floor)
  double tolerance = 0.0;
  bool verdict = false;
};

inline constexpr double kSpreadFloor = 1e-9;

inline ConstancyReport measure_constancy(std::string field, std::span<const double> samples, double tol,
                                         double floor = kSpreadFloor) {
  ConstancyReport r;
  r.field = std::move(field);
  r.tolerance = tol;
  if (samples.empty()) return r;
  double sum = 0.0, lo = samples[0], hi = samples[0];
  for (double v : samples) {
    sum += v;
    lo = std::fmin(lo, v);
    hi = std::fmax(hi, v);
  }
  r.mean = sum / static_cast<double>(samples.size());
  for (double v : samples) r.max_abs_deviation = std::fmax(r.max_abs_deviation, std::abs(v - r.mean));
  r.relative_spread = (hi - lo) / std::fmax(std::abs(r.mean), floor);
  r.verdict = r.relative_spread <= tol;
  return r;
}

struct BonnetTolerances {
  double constancy = 1e-6;     // deciding which curvature functions are constant
  double verification = 1e-5;  // checking the starred prediction
  double focal = 1e-6;         // |A(mu)| below this anywhere -> OffsetSingular
};

struct CandidateVerification {
  std::string label;
  Proposition proposition = Proposition::P6_1;
  std::optional<BonnetCandidate> candidate;
  /// "verified", "not_verified", "OffsetSingular", or the kind() of the
  /// error that prevented a candidate.
  std::string status;
  std::string message;
  double min_abs_A = 0.0;
  std::optional<ConstancyReport> measured;
  double prediction_error = 0.0;  // |measured mean - predicted|
};

struct BonnetReport {
  ConstancyReport H, H2, K;
  bool nothing_applicable = true;
  std::vector<CandidateVerification> candidates;
};

namespace detail {

inline CandidateVerification check_candidate(const BonnetCandidate& cand, std::span<const CurvatureSet> samples,
                                             const BonnetTolerances& tol) {
  CandidateVerification v;
  v.label = cand.label;
  v.proposition = cand.proposition;
  v.candidate = cand;
  double min_a = std::numeric_limits<double>::infinity();
  for (const auto& c : samples) min_a = std::fmin(min_a, std::abs(a_polynomial(c, cand.mu)));
  v.min_abs_A = min_a;
  if (min_a < tol.focal) {
    v.status = "OffsetSingular";
    v.message = "A(mu) vanishes on the grid (focal distance)";
    return v;
  }
  std::vector<double> values;
  values.reserve(samples.size());
  for (const auto& c : samples) values.push_back(field_of(star_curvatures(c, cand.mu), cand.predicted_field));
  // A predicted zero is measured against unit scale.
  const double floor = std::abs(cand.predicted_value) < kNonZero ? 1.0 : kSpreadFloor;
  v.measured = measure_constancy(to_string(cand.predicted_field) + "*", values, tol.verification, floor);
  v.prediction_error = std::abs(v.measured->mean - cand.predicted_value);
  const bool matches = v.prediction_error <= tol.verification * std::fmax(1.0, std::abs(cand.predicted_value));
  v.status = v.measured->verdict && matches ? "verified" : "not_verified";
  return v;
}

template <class F>
void try_candidate(BonnetReport& report, const std::string& label, Proposition prop, F&& make,
                   std::span<const CurvatureSet> samples, const BonnetTolerances& tol) {
  try {
    report.candidates.push_back(check_candidate(make(), samples, tol));
  } catch (const Error& e) {
    CandidateVerification v;
    v.label = label;
    v.proposition = prop;
    v.status = e.kind();
    v.message = e.what();
    report.candidates.push_back(std::move(v));
  }
}

}  // namespace detail

/// Decide which curvature functions are constant over the samples, compute
/// every applicable closed-form distance from the grid means, and measure
/// the predicted starred function over the same samples.
inline BonnetReport verify_bonnet(std::span<const CurvatureSet> samples, const BonnetTolerances& tol = {}) {
  BonnetReport report;
  std::vector<double> hs, h2s, ks;
  for (const auto& c : samples) {
    hs.push_back(c.H);
    h2s.push_back(c.H2);
    ks.push_back(c.K);
  }
  report.H = measure_constancy("H", hs, tol.constancy);
  report.H2 = measure_constancy("H2", h2s, tol.constancy);
  report.K = measure_constancy("K", ks, tol.constancy);
  const double H = report.H.mean, H2 = report.H2.mean, K = report.K.mean;

  if (report.K.verdict && report.H2.verdict) {
    report.nothing_applicable = false;
    detail::try_candidate(report, "mu1", Proposition::P6_1, [&] { return mu1(H2, K); }, samples, tol);
  }
  if (report.K.verdict && report.H.verdict) {
    report.nothing_applicable = false;
    detail::try_candidate(report, "mu2", Proposition::P6_3a, [&] { return mu2(H, K); }, samples, tol);
    detail::try_candidate(report, "mu3", Proposition::P6_3b, [&] { return mu3(H, K); }, samples, tol);
    if (auto extra = mu3_double_root(H, K))
      report.candidates.push_back(detail::check_candidate(*extra, samples, tol));
  }
  if (report.H2.verdict && report.H.verdict) {
    report.nothing_applicable = false;
    for (auto& o : mu_4_to_9(H, H2)) {
      if (o.candidate) {
        report.candidates.push_back(detail::check_candidate(*o.candidate, samples, tol));
      } else {
        CandidateVerification v;
        v.label = o.label;
        v.proposition = o.proposition;
        v.status = o.error;
        v.message = o.message;
        report.candidates.push_back(std::move(v));
      }
    }
  }

  // Pointwise-quotient conditions: constant H2/K, constant minimal roots.
  bool k_nonzero = !samples.empty();
  for (const auto& c : samples) k_nonzero = k_nonzero && std::abs(c.K) >= kNonZero;
  if (k_nonzero) {
    std::vector<double> ratio;
    for (const auto& c : samples) ratio.push_back(c.H2 / c.K);
    const ConstancyReport r = measure_constancy("H2/K", ratio, tol.constancy);
    if (r.verdict) {
      detail::try_candidate(
          report, "h2_zero", Proposition::H2Zero_Prop5_1,
          [&] {
            BonnetCandidate c;
            c.proposition = Proposition::H2Zero_Prop5_1;
            c.label = "h2_zero";
            c.mu = h2_vanishing_mu(r.mean * K, K);
            c.predicted_field = CurvatureField::H2;
            c.predicted_value = 0.0;
            return c;
          },
          samples, tol);
    }

    std::array<std::vector<double>, 2> roots;
    bool all_two = true;
    for (const auto& c : samples) {
      if (!at_least(c.H2 * c.H2, c.K * c.H)) {
        all_two = false;
        break;
      }
      const auto [plus, minus] = quadratic_pair(c.K, 2.0 * c.H2, c.H);
      roots[0].push_back(minus);
      roots[1].push_back(plus);
    }
    if (all_two) {
      for (int i = 0; i < 2; ++i) {
        const ConstancyReport r = measure_constancy("c" + std::to_string(i + 1), roots[static_cast<std::size_t>(i)], tol.constancy);
        if (!r.verdict || std::abs(r.mean) < kNonZero) continue;
        if (i == 1 && std::abs(r.mean - measure_constancy("c1", roots[0], tol.constancy).mean) <= tol.constancy * std::abs(r.mean))
          continue;  // double root, already listed
        BonnetCandidate c;
        c.proposition = Proposition::Minimal_5b;
        c.label = "minimal_c" + std::to_string(i + 1);
        c.mu = r.mean;
        c.predicted_field = CurvatureField::H;
        c.predicted_value = 0.0;
        c.certificate = backward_error({c.mu * c.mu * K, -2.0 * c.mu * H2, H});
        report.candidates.push_back(detail::check_candidate(c, samples, tol));
      }
    }
  }
  return report;
}

}  // namespace relgeo4
