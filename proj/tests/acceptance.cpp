// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "jet_corpus.hpp"
#include "support.hpp"

using namespace relgeo4;
using testing_support::ellipsoid;
using testing_support::sphere;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Running maximum with a pass/fail verdict against a bound.
struct Worst {
  double bound;
  double value = 0.0;
  bool bad = false;
  void add(double v) {
    if (!(v <= bound)) bad = true;
    if (std::isnan(v) || v > value) value = v;
  }
  bool ok() const { return !bad; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CurvatureSet triple(double H, double H2, double K) {
  CurvatureSet c;
  c.H = H;
  c.H2 = H2;
  c.K = K;
  return c;
}

std::vector<CurvatureSet> grid_curvatures(const SurfaceSpec& s) {
  std::vector<CurvatureSet> out;
  for (const auto& p : grid_points(s)) out.push_back(build_frame<4>(s.x, s.normalization, s.orientation, p).curvature);
  return out;
}

const char* kCustomQ = "mode = \"custom\"\nq = \"1 + 0.1*sin(u1)\"";

// ---------------------------------------------------------------------------

Outcome sphere_reduction() {
  Worst spread{1e-7}, error{1e-6};
  for (double r : {0.5, 1.0, 2.0}) {
    const SurfaceSpec s = sphere(r);
    const auto curv = grid_curvatures(s);
    if (curv.size() != 343) return {false, "grid is not 7^3"};
    std::vector<double> hs, h2s, ks;
    for (const auto& c : curv) {
      hs.push_back(c.H);
      h2s.push_back(c.H2);
      ks.push_back(c.K);
      error.add(std::abs(c.H - 1.0 / r));
      error.add(std::abs(c.H2 - 1.0 / (r * r)));
      error.add(std::abs(c.K - 1.0 / (r * r * r)));
    }
    for (const auto* v : {&hs, &h2s, &ks}) spread.add(measure_constancy("", *v, 1e-7).relative_spread);
  }
  return {spread.ok() && error.ok(), "spread " + fmt(spread.value) + ", error " + fmt(error.value)};
}

Outcome constant_support_sphere() {
  Worst kappa{1e-6}, radius{1e-6};
  const double r = 1.0;
  for (double c : {0.5, 2.0}) {
    const SurfaceSpec s = sphere(r, "mode = \"custom\"\nq = \"" + format_double(c) + "\"");
    for (const auto& p : grid_points(s)) {
      const auto base = build_frame<6>(s.x, s.normalization, s.orientation, p);
      for (double k : base.curvature.kappas) kappa.add(std::abs(k - c));
      for (double mu : {0.25 / c, -0.5 / c, 0.75 / c}) {
        const auto rec = parallel_frame(base, mu);
        const double rho = r - mu * c;
        radius.add(std::abs(norm(rec.position()) - rho));
        for (double k : rec.curvature.kappas) radius.add(std::abs(k * rho - c));
      }
    }
  }
  return {kappa.ok() && radius.ok(), "kappa " + fmt(kappa.value) + ", radius " + fmt(radius.value)};
}

Outcome star_transform() {
  const SurfaceSpec s = sphere(1.0);
  const CurvatureSet star = star_curvatures(triple(1.0, 1.0, 1.0), 0.5);
  Worst closed{1e-12}, rec{1e-6};
  closed.add(std::abs(a_polynomial(triple(1.0, 1.0, 1.0), 0.5) - 0.125));
  closed.add(std::abs(star.K - 8.0));
  closed.add(std::abs(star.H2 - 4.0));
  closed.add(std::abs(star.H - 2.0));
  for (const auto& p : grid_points(s)) {
    const auto base = build_frame<6>(s.x, s.normalization, s.orientation, p);
    const CurvatureSet pt = star_curvatures(base.curvature, 0.5);
    const CurvatureSet full = parallel_frame(base, 0.5).curvature;
    rec.add(std::abs(full.K - pt.K));
    rec.add(std::abs(full.H2 - pt.H2));
    rec.add(std::abs(full.H - pt.H));
    rec.add(std::abs(full.K - 8.0));
  }
  return {closed.ok() && rec.ok(), "closed form " + fmt(closed.value) + ", recompute " + fmt(rec.value)};
}

Outcome pointwise_identities_check() {
  const SurfaceSpec e = ellipsoid();
  const auto curv = grid_curvatures(e);
  const auto mus = sample_offsets(curv);
  if (mus.size() != 20) return {false, "offset sampler returned " + std::to_string(mus.size())};
  Worst ids{1e-8}, spot{1e-14};
  for (double mu : mus)
    for (const auto& c : curv)
      for (const auto& id : pointwise_identities(c, mu)) ids.add(id.residual());
  const auto sp = pointwise_identities(triple(1.0, 1.0, 1.0), 0.5);
  spot.add(std::abs(sp[3].lhs - 0.25));
  spot.add(std::abs(sp[3].rhs - 0.25));
  spot.add(std::abs(sp[1].lhs + 0.25));
  spot.add(std::abs(sp[1].rhs + 0.25));
  return {ids.ok() && spot.ok(),
          std::to_string(curv.size() * mus.size() * 6) + " residuals, worst " + fmt(ids.value) + ", spot " +
              fmt(spot.value)};
}

Outcome invariance() {
  const SurfaceSpec e = ellipsoid();
  const auto curv = grid_curvatures(e);
  const auto mus = sample_offsets(curv);
  Worst drift{1e-6};
  for (double mu : mus)
    for (const auto& c : curv) drift.add(std::abs(invariant_J(star_curvatures(c, mu)) - invariant_J(c)));
  return {drift.ok(), "max drift " + fmt(drift.value)};
}

Outcome mu_recovery() {
  Worst err{1e-8};
  std::vector<SurfaceSpec> surfaces{ellipsoid(), sphere(0.5), sphere(1.0), sphere(2.0)};
  for (const auto& s : surfaces) {
    const auto curv = grid_curvatures(s);
    for (double mu : sample_offsets(curv))
      for (const auto& c : curv) err.add(std::abs(mu_from_ratio(c, star_curvatures(c, mu)) - mu));
  }
  return {err.ok(), "max error " + fmt(err.value)};
}

Outcome bonnet_sphere() {
  const SurfaceSpec s = sphere(2.0);
  const auto curv = grid_curvatures(s);
  const BonnetReport br = verify_bonnet(curv);
  const CandidateVerification* hit = nullptr;
  for (const auto& v : br.candidates)
    if (v.label == "mu1") hit = &v;
  if (!hit || !hit->candidate) return {false, "mu1 not proposed"};
  const double mu = hit->candidate->mu;
  Worst root{1e-9}, cert{1e-9}, value{1e-7}, spread{1e-7};
  root.add(std::abs(mu + 1.0));
  cert.add(hit->candidate->certificate);
  if (!hit->measured) return {false, "mu1 not measured: " + hit->status};
  value.add(std::abs(hit->measured->mean - 1.0 / 3.0));
  spread.add(hit->measured->relative_spread);
  // Same measurement on the recomputed mu1-parallel hypersurface.
  std::vector<double> hs;
  for (const auto& p : grid_points(s)) {
    const auto base = build_frame<6>(s.x, s.normalization, s.orientation, p);
    hs.push_back(parallel_frame(base, mu).curvature.H);
  }
  const ConstancyReport rec = measure_constancy("H*", hs, 1e-7);
  value.add(std::abs(rec.mean - 1.0 / 3.0));
  spread.add(rec.relative_spread);
  const bool ok = root.ok() && cert.ok() && value.ok() && spread.ok() && hit->status == "verified";
  return {ok, "mu1 = " + format_double(mu) + ", certificate " + fmt(cert.value) + ", H* error " + fmt(value.value) +
                  ", spread " + fmt(spread.value)};
}

Outcome special_cases() {
  Worst err{1e-10};
  auto find = [](const std::vector<RootOutcome>& v, const std::string& label) -> std::optional<BonnetCandidate> {
    for (const auto& o : v)
      if (o.label == label) return o.candidate;
    return std::nullopt;
  };
  int missing = 0;
  for (double H : {0.3, 0.8, 1.0, 1.7, -0.6}) {
    {
      const BonnetCandidate c = mu2(H, 2.0 * H * H * H);
      err.add(std::abs(c.mu + 1.0 / H));
      err.add(std::abs(c.predicted_value - H * H / 3.0));
    }
    {
      const BonnetCandidate c = mu3(H, H * H * H);
      err.add(std::abs(c.mu + 2.0 / H));
      err.add(std::abs(c.predicted_value - H / 3.0));
    }
    const std::array<std::tuple<double, const char*, double, double>, 3> pairs{{
        {0.75 * H * H, "mu4", 2.0 / (3.0 * H), -27.0 * H * H * H / 8.0},
        {9.0 * H * H / 8.0, "mu6", 2.0 / (3.0 * H), 9.0 * H * H / 4.0},
        {H * H, "mu8", 1.0 / H, -H},
    }};
    for (const auto& [H2, first, mu, value] : pairs) {
      const auto v = mu_4_to_9(H, H2);
      const std::string second = std::string("mu") + std::to_string(first[2] - '0' + 1);
      for (const std::string& label : {std::string(first), second}) {
        const auto c = find(v, label);
        if (!c) {
          ++missing;
          continue;
        }
        err.add(std::abs(c->mu - mu));
        err.add(std::abs(c->predicted_value - value));
      }
    }
  }
  for (double K : {0.125, 1.0, 4.913, -2.0}) {
    const double H2 = std::cbrt(K * K);
    const BonnetCandidate c = mu1(H2, K);
    err.add(std::abs(c.mu + 1.0 / (2.0 * std::cbrt(K))));
    err.add(std::abs(c.predicted_value - 2.0 * std::cbrt(K) / 3.0));
  }
  return {err.ok() && missing == 0, "max error " + fmt(err.value) + (missing ? ", missing roots" : "")};
}

Outcome root_certificates() {
  std::mt19937_64 gen(0xace5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Worst cert{1e-9};
  std::size_t roots = 0, raised = 0, wrong = 0;
  std::string first_wrong;
  auto note_wrong = [&](const std::string& what) {
    if (wrong++ == 0) first_wrong = what;
  };
  // Strict margins keep boundary cases out of the error-expectation half.
  auto clearly = [](double lhs, double rhs, bool& holds) {
    const double scale = std::fmax(std::abs(lhs), std::abs(rhs));
    if (std::abs(lhs - rhs) <= 1e-6 * scale) return false;
    holds = lhs > rhs;
    return true;
  };
  // expect: 1 success, 0 PreconditionViolated, -1 undecided.
  auto expect = [&](const std::string& label, int want, auto&& call) {
    try {
      const BonnetCandidate c = call();
      ++roots;
      cert.add(c.certificate);
      if (want == 0) note_wrong(label + " returned despite violated precondition");
    } catch (const PreconditionViolated&) {
      ++raised;
      if (want == 1) note_wrong(label + " raised despite satisfied precondition");
    }
  };
  for (int n = 0; n < 10000; ++n) {
    double H = u(gen), H2 = u(gen), K = u(gen);
    if (n % 10 == 3) K = 0.0;
    if (n % 10 == 7) H2 = 0.0;
    bool g = false;
    const bool k_nonzero = K != 0.0, h2_nonzero = H2 != 0.0;

    int want = !k_nonzero ? 0 : clearly(K * K, H2 * H2 * H2, g) ? int(g) : -1;
    expect("mu1", want, [&] { return mu1(H2, K); });
    want = !k_nonzero ? 0 : clearly(K * K, 2.0 * K * H * H * H, g) ? int(g) : -1;
    expect("mu2", want, [&] { return mu2(H, K); });
    want = !k_nonzero ? 0 : clearly(K * K, K * H * H * H, g) ? int(g) : -1;
    expect("mu3", want, [&] { return mu3(H, K); });

    const std::array<std::pair<double, double>, 3> gates{
        {{3.0 * H * H, 4.0 * H2}, {9.0 * H * H, 8.0 * H2}, {H * H, H2}}};
    const auto outs = mu_4_to_9(H, H2);
    if (outs.size() != 6) note_wrong("mu_4_to_9 returned " + std::to_string(outs.size()) + " entries");
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const auto& o = outs[i];
      want = !h2_nonzero ? 0 : clearly(gates[i / 2].first, gates[i / 2].second, g) ? int(g) : -1;
      if (o.candidate) {
        ++roots;
        cert.add(o.candidate->certificate);
        if (want == 0) note_wrong(o.label + " returned despite violated precondition");
      } else if (o.error == "PreconditionViolated") {
        ++raised;
        if (want == 1) note_wrong(o.label + " raised despite satisfied precondition");
      } else if (o.error != "ZeroRoot") {
        note_wrong(o.label + " raised " + o.error);
      }
    }

    want = !k_nonzero ? 0 : clearly(H2 * H2, K * H, g) ? int(g) : -1;
    try {
      for (double mu : minimal_parallel_mus(H, H2, K)) {
        ++roots;
        cert.add(backward_error({mu * mu * K, -2.0 * mu * H2, H}));
      }
      if (want == 0) note_wrong("minimal roots returned despite violated precondition");
    } catch (const PreconditionViolated&) {
      ++raised;
      if (k_nonzero) note_wrong("minimal roots raised PreconditionViolated with K != 0");
    } catch (const NoRealRoot&) {
      ++raised;
      if (!k_nonzero || want == 1) note_wrong("minimal roots raised NoRealRoot");
    }

    try {
      const double mu = h2_vanishing_mu(H2, K);
      ++roots;
      cert.add(std::abs(star_curvatures(triple(H, H2, K), mu).H2) /
               std::fmax(1.0, std::abs(H2)));
      if (!k_nonzero || !h2_nonzero) note_wrong("H2-zero distance returned on a zero input");
    } catch (const ZeroRelativeCurvature&) {
      ++raised;
      if (k_nonzero) note_wrong("H2-zero distance raised ZeroRelativeCurvature with K != 0");
    } catch (const PreconditionViolated&) {
      ++raised;
      if (!k_nonzero || h2_nonzero) note_wrong("H2-zero distance raised PreconditionViolated");
    } catch (const OffsetSingular&) {
      ++raised;
    }
  }
  std::string detail = std::to_string(roots) + " roots, worst certificate " + fmt(cert.value) + ", " +
                       std::to_string(raised) + " declared errors";
  if (wrong) detail += ", " + std::to_string(wrong) + " mismatches (first: " + first_wrong + ")";
  return {cert.ok() && wrong == 0, detail};
}

Outcome frame_laws() {
  Worst laws{1e-7}, peterson{1e-7};
  std::size_t frames = 0;
  const std::vector<std::string> norms{"mode = \"euclidean\"", "mode = \"equiaffine\"", kCustomQ};
  for (const auto& n : norms) {
    std::vector<SurfaceSpec> surfaces{sphere(0.5, n), sphere(1.0, n), sphere(2.0, n), ellipsoid(n)};
    for (const auto& s : surfaces) {
      std::vector<RelativeFrame<4>> frames_s;
      std::vector<CurvatureSet> curv;
      for (const auto& p : grid_points(s)) {
        frames_s.push_back(build_frame<4>(s.x, s.normalization, s.orientation, p));
        curv.push_back(frames_s.back().curvature);
      }
      const auto mus = sample_offsets(curv, 3);
      for (const auto& f : frames_s) {
        const FrameResiduals r = frame_residuals(f);
        for (double v : {r.weingarten, r.conormal_tangent, r.conormal_unit, r.conormal_xi, r.b_symmetry, r.tangency})
          laws.add(v);
        for (double mu : mus) peterson.add(peterson_check(f.x, f.y, mu));
        ++frames;
      }
    }
  }
  return {laws.ok() && peterson.ok(),
          std::to_string(frames) + " frames, laws " + fmt(laws.value) + ", Peterson " + fmt(peterson.value)};
}

Outcome jet_engine() {
  using testing_support::close_rel;
  using testing_support::fd1;
  using testing_support::fd2;
  const std::vector<ChartPoint> points{{0.3, -0.7, 0.5}, {0.9, 0.2, -0.4}, {-0.6, 0.8, 1.1}};
  std::size_t checked = 0, failed = 0;
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::fmax(1.0, std::abs(b)); };
  for (const auto& c : testing_support::jet_corpus()) {
    const Expression e = parse(c.source);
    for (const auto& p : points) {
      const Jet<4> j = eval_jet<4>(e, p);
      for (int i = 0; i < 3; ++i) {
        const double d1 = rel(j.partial({i}), fd1(c.f, p, i));
        worst = std::fmax(worst, d1);
        failed += d1 > 1e-7;
        ++checked;
        for (int k = 0; k < 3; ++k) {
          const double d2 = rel(j.partial({i, k}), fd2(c.f, p, i, k));
          worst = std::fmax(worst, d2);
          failed += d2 > 1e-7;
          ++checked;
        }
      }
    }
  }
  return {failed == 0, std::to_string(checked) + " partials, worst " + fmt(worst)};
}

Outcome negative_controls() {
  std::vector<std::string> got;
  auto run = [&](const std::string& want, auto&& body) {
    try {
      body();
      got.push_back(want + ": nothing raised");
      return false;
    } catch (const ValidationError& e) {
      got.push_back(want + ": " + e.cause());
      return e.cause() == want;
    } catch (const Error& e) {
      got.push_back(want + ": " + e.kind());
      return e.kind() == want;
    }
  };
  const bool focal = run("OffsetSingular", [] { (void)cmd_parallel(sphere(1.0), 1.0); });
  const bool flat = run("VanishingGaussCurvature", [] {
    (void)load_spec_text(
        "[surface]\nname = \"flat\"\nx1 = \"u1\"\nx2 = \"u2\"\nx3 = \"u3\"\nx4 = \"0.3*u1 - 0.2*u2 + 0.5*u3\"\n"
        "u1 = [-1, 1]\nu2 = [-1, 1]\nu3 = [-1, 1]\n[normalization]\nmode = \"euclidean\"\n");
  });
  const bool zero = run("ZeroSupport", [] { (void)sphere(1.0, "mode = \"custom\"\nq = \"0\""); });
  std::string detail;
  for (const auto& g : got) detail += (detail.empty() ? "" : "; ") + g;
  return {focal && flat && zero, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"sphere reduction", sphere_reduction},
      {"constant-q sphere", constant_support_sphere},
      {"star-transform equivalence", star_transform},
      {"pointwise identities", pointwise_identities_check},
      {"offset invariance of J", invariance},
      {"mu recovery", mu_recovery},
      {"Bonnet verification on sphere r=2", bonnet_sphere},
      {"special-case reproductions", special_cases},
      {"root certificates", root_certificates},
      {"frame laws", frame_laws},
      {"jet partials vs finite differences", jet_engine},
      {"negative controls", negative_controls},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const Error& e) {
      o = {false, std::string("unexpected ") + e.kind() + ": " + e.what()};
    } catch (const std::exception& e) {
      o = {false, std::string("unexpected exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %-36s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
