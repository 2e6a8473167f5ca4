// relgeo4 command-line front end.
//
//   relgeo4 analyze|parallel|bonnet|verify <spec> [--mu R] [--grid AxBxC] [--tol R]
//           [--format json|text] [--csv PATH]
//   relgeo4 roots [--H R] [--H2 R] [--K R] [--format json|text]
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "relgeo4.hpp"

namespace {

struct Options {
  std::string spec_path;
  std::optional<double> mu;
  std::optional<std::string> grid;
  std::optional<double> tol;
  std::string format = "json";
  std::optional<std::string> csv;
  std::optional<double> H, H2, K;
};

relgeo4::SurfaceSpec load(const Options& o) {
  std::ifstream in(o.spec_path);
  if (!in) throw relgeo4::FormatError("cannot open spec file '" + o.spec_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  relgeo4::SurfaceSpec spec = relgeo4::parse_spec(buf.str(), o.spec_path);
  if (o.grid) spec.grid = relgeo4::parse_grid(*o.grid);
  relgeo4::validate_spec(spec);
  return spec;
}

int emit(const relgeo4::CommandOutput& out, const Options& o) {
  if (o.format == "text") std::cout << relgeo4::to_text(out.report);
  else std::cout << relgeo4::to_json_text(out.report);
  if (o.csv) {
    std::ofstream f(*o.csv);
    if (!f) throw relgeo4::FormatError("cannot write csv file '" + *o.csv + "'");
    f << relgeo4::to_csv(out.report);
  }
  return out.exit_code;
}

void add_common(CLI::App* sub, Options& o, bool with_spec) {
  if (with_spec) sub->add_option("spec", o.spec_path, "surface spec file (.surf)")->required();
  sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--csv", o.csv, "write the per-point table as CSV");
  if (with_spec) sub->add_option("--grid", o.grid, "sampling grid AxBxC (overrides the spec)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative differential geometry of hypersurfaces in R^4"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "curvature functions and frame residuals on the grid");
  add_common(analyze, o, true);
  analyze->add_option("--tol", o.tol, "relative spread deciding constancy");

  auto* parallel = app.add_subcommand("parallel", "relatively parallel hypersurface at distance mu");
  add_common(parallel, o, true);
  parallel->add_option("--mu", o.mu, "relative distance (nonzero)")->required();

  auto* bonnet = app.add_subcommand("bonnet", "closed-form distances to parallels with a constant curvature function");
  add_common(bonnet, o, true);
  bonnet->add_option("--tol", o.tol, "relative spread deciding constancy");

  auto* roots = app.add_subcommand("roots", "evaluate the distance formulas for given H, H2, K");
  add_common(roots, o, false);
  roots->add_option("--H", o.H, "relative mean curvature");
  roots->add_option("--H2", o.H2, "second relative mean curvature");
  roots->add_option("--K", o.K, "relative curvature");

  auto* verify = app.add_subcommand("verify", "run the invariant suite; exit 1 on any failure");
  add_common(verify, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) return emit(relgeo4::cmd_analyze(load(o), o.tol.value_or(1e-6)), o);
    if (parallel->parsed()) return emit(relgeo4::cmd_parallel(load(o), *o.mu), o);
    if (bonnet->parsed()) return emit(relgeo4::cmd_bonnet(load(o), o.tol.value_or(1e-6)), o);
    if (roots->parsed()) return emit(relgeo4::cmd_roots({o.H, o.H2, o.K}), o);
    if (verify->parsed()) return emit(relgeo4::cmd_verify(load(o)), o);
  } catch (const relgeo4::ValidationError& e) {
    std::cerr << "error: ValidationError (" << e.cause() << "): " << e.what() << "\n";
    return 2;
  } catch (const relgeo4::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  }
  return 2;
}
